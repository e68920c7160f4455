"""
Manager para coordinar las familias de canales.
Proporciona una interfaz unificada para construir canales por nombre.
Implementa el patrón Singleton para garantizar una sola instancia.
"""

import logging
from typing import Any, Dict, List, Optional

from .channel_family_provider import ChannelFamilyProvider
from .dephasing_providers import (
    CorrelatedDephasingProvider,
    IdentityProvider,
    LocalPhaseFlipProvider,
    PhaseDampingProvider,
)
from .gate_providers import (
    ControlledPhaseProvider,
    CZCorrelatedDephasingProvider,
    CZPhaseDampingProvider,
    MixedUnitaryProvider,
)
from .kraus_channel import KrausChannel
from .noise_providers import (
    GlobalDepolarizingProvider,
    LocalAmplitudeDampingProvider,
    LocalDepolarizingProvider,
)


class ChannelManager:
    """
    Manager principal de las familias de canales.
    Registra los proveedores por su nombre de línea de comandos.
    Implementa el patrón Singleton.
    """

    _instance = None
    _initialized = False

    def __new__(cls):
        """Implementa el patrón Singleton."""
        if cls._instance is None:
            cls._instance = super(ChannelManager, cls).__new__(cls)
        return cls._instance

    def __init__(self):
        """Inicializa el manager solo una vez."""
        if not self._initialized:
            self.logger = logging.getLogger(__name__)
            self.providers: Dict[str, ChannelFamilyProvider] = {}
            self._initialize_providers()
            self._initialized = True

    def _initialize_providers(self):
        """Registra todas las familias disponibles."""
        for provider in (
            IdentityProvider(),
            CorrelatedDephasingProvider(),
            LocalPhaseFlipProvider(),
            LocalAmplitudeDampingProvider(),
            LocalDepolarizingProvider(),
            GlobalDepolarizingProvider(),
            ControlledPhaseProvider(),
            CZCorrelatedDephasingProvider(),
            PhaseDampingProvider(),
            CZPhaseDampingProvider(),
            MixedUnitaryProvider(),
        ):
            self._register_provider(provider.name, provider)
        self.logger.info(f"Familias de canales inicializadas: {list(self.providers.keys())}")

    def _register_provider(self, name: str, provider: ChannelFamilyProvider):
        """
        Registra una familia en el manager.

        Args:
            name: Nombre único de la familia
            provider: Instancia del proveedor
        """
        if not isinstance(provider, ChannelFamilyProvider):
            raise ValueError(f"El proveedor debe heredar de ChannelFamilyProvider: {type(provider)}")

        self.providers[name] = provider
        self.logger.debug(f"Familia de canales registrada: {name} ({provider.__class__.__name__})")

    def get_provider(self, name: str) -> Optional[ChannelFamilyProvider]:
        return self.providers.get(name)

    def require_provider(self, name: str) -> ChannelFamilyProvider:
        """
        Raises:
            ValueError: Si la familia no existe
        """
        provider = self.get_provider(name)
        if not provider:
            raise ValueError(f"Canal '{name}' no encontrado. Canales disponibles: {list(self.providers.keys())}")
        return provider

    def build(self, name: str, value: float, **options) -> KrausChannel:
        """
        Construye y valida un miembro de una familia.

        Args:
            name: Nombre de la familia
            value: Valor del parámetro de barrido
            **options: Opciones de la familia

        Returns:
            KrausChannel: Canal CPTP

        Raises:
            ValueError: Si la familia no existe o el parámetro está fuera de dominio
        """
        provider = self.require_provider(name)
        try:
            return provider.build(value, **options).require_valid()
        except ValueError as e:
            self.logger.error(f"Error construyendo '{name}' con {provider.parameter}={value}: {e}")
            raise

    def get_provider_status(self, name: str) -> Dict[str, Any]:
        provider = self.get_provider(name)
        if not provider:
            return {"error": f"Canal '{name}' no encontrado"}
        status = provider.get_info()
        status['type'] = provider.__class__.__name__
        status['available'] = provider.is_available()
        return status

    def get_all_providers_status(self) -> Dict[str, Dict[str, Any]]:
        return {name: self.get_provider_status(name) for name in self.providers.keys()}

    def get_available_providers(self) -> List[str]:
        return [name for name, provider in self.providers.items() if provider.is_available()]

    @classmethod
    def get_instance(cls):
        """
        Obtiene la instancia singleton del manager.

        Returns:
            ChannelManager: Instancia única del manager
        """
        return cls()

    @classmethod
    def reset_instance(cls):
        """
        Resetea la instancia singleton (útil para testing).
        """
        cls._instance = None
        cls._initialized = False
