from abc import ABC, abstractmethod
from typing import Any, Dict, Tuple

from core.exceptions import ParameterDomainError
from .kraus_channel import KrausChannel


class ChannelFamilyProvider(ABC):
    """Clase base abstracta para familias de canales con un parámetro de barrido."""

    name: str = ''
    parameter: str = 'x'
    description: str = ''
    default_grid: Tuple[float, float, int] = (0.0, 1.0, 11)
    unit: str = ''
    default_options: Dict[str, float] = {}
    separable: bool = False

    @abstractmethod
    def build(self, value: float, **options) -> KrausChannel:
        """
        Construye el miembro de la familia para un valor del parámetro.

        Args:
            value: Valor del parámetro de barrido
            **options: Opciones de la familia (p. ej. g, Gamma)

        Returns:
            KrausChannel: Canal validado
        """
        pass

    def reference_values(self, value: float, **options) -> Dict[str, float]:
        """
        Valores analíticos conocidos en este punto (f_avg, f_prod, chi_F, e_C, e_N, e_L).

        Returns:
            Dict[str, float]: Solo las curvas que la familia tiene en forma cerrada
        """
        return {}

    def resolve_options(self, options: Dict[str, Any] = None) -> Dict[str, float]:
        """
        Completa las opciones con los valores por defecto.

        Raises:
            ParameterDomainError: Si se pasa una opción que la familia no admite
        """
        resolved = dict(self.default_options)
        for key, value in (options or {}).items():
            if key not in self.default_options:
                raise ParameterDomainError(
                    f"Opción '{key}' no admitida por '{self.name}'. Opciones: {list(self.default_options)}"
                )
            resolved[key] = float(value)
        return resolved

    def is_available(self) -> bool:
        return True

    def get_info(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'parameter': self.parameter,
            'description': self.description,
            'unit': self.unit,
            'default_grid': list(self.default_grid),
            'options': dict(self.default_options),
            'separable': self.separable,
        }
