"""
Canal bipartito en forma de Kraus.

Los invariantes T, M_A y M_B se calculan al construir el canal porque
alimentan todas las fórmulas analíticas de fidelidad.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from core.exceptions import ChannelValidationError, DimensionError
from core.linalg import (
    as_complex_matrix,
    partial_trace,
    require_density_matrix,
)
from diagnostics.config import CHANNEL_CONFIG

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelReport:
    """Resultado de la validación CPTP de un canal."""
    dA: int
    dB: int
    rank: int
    residual: float
    passed: bool
    T: float
    M_A: float
    M_B: float
    tolerance: float

    def as_dict(self) -> Dict[str, Any]:
        return {
            'dA': self.dA,
            'dB': self.dB,
            'rank': self.rank,
            'completeness_residual': self.residual,
            'passed': self.passed,
            'T': self.T,
            'M_A': self.M_A,
            'M_B': self.M_B,
            'tolerance': self.tolerance,
        }


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """
    Mapa Φ(ρ) = Σ K_α ρ K_α† sobre C^dA ⊗ C^dB.

    Attributes:
        kraus: Pila (r, D, D) de operadores de Kraus, D = dA·dB (solo lectura)
        dA, dB: Dimensiones locales
        label: Descriptor legible (nombre de familia y parámetros)
        T: Σ |Tr K_α|²
        M_A: Σ Tr(K_α^A K_α^A†) con K_α^A = Tr_B K_α
        M_B: Σ Tr(K_α^B K_α^B†) con K_α^B = Tr_A K_α
    """
    kraus: np.ndarray
    dA: int
    dB: int
    label: str = ''
    T: float = field(init=False)
    M_A: float = field(init=False)
    M_B: float = field(init=False)

    def __post_init__(self):
        stack = as_complex_matrix(self.kraus)
        if stack.ndim == 2:
            stack = stack[None, :, :]
        if stack.ndim != 3 or stack.shape[0] < 1:
            raise DimensionError(f"Se esperaba una pila de operadores de Kraus, forma {stack.shape}")
        dA, dB = int(self.dA), int(self.dB)
        if dA < 1 or dB < 1:
            raise DimensionError(f"Dimensiones locales inválidas: {dA}×{dB}")
        D = dA * dB
        if stack.shape[1:] != (D, D):
            raise DimensionError(f"Operadores de Kraus {stack.shape[1:]} incompatibles con dA·dB = {D}")

        stack = np.array(stack, copy=True)
        stack.setflags(write=False)
        object.__setattr__(self, 'kraus', stack)
        object.__setattr__(self, 'dA', dA)
        object.__setattr__(self, 'dB', dB)

        traces = np.trace(stack, axis1=1, axis2=2)
        reduced_a = partial_trace(stack, dA, dB, keep='A')
        reduced_b = partial_trace(stack, dA, dB, keep='B')
        object.__setattr__(self, 'T', float(np.sum(np.abs(traces) ** 2)))
        object.__setattr__(self, 'M_A', float(np.sum(np.abs(reduced_a) ** 2)))
        object.__setattr__(self, 'M_B', float(np.sum(np.abs(reduced_b) ** 2)))

    @property
    def D(self) -> int:
        return self.dA * self.dB

    @property
    def rank(self) -> int:
        """Número de operadores de Kraus."""
        return self.kraus.shape[0]

    def completeness_residual(self) -> float:
        """‖Σ K_α†K_α − I‖_F."""
        gram = np.einsum('kji,kjl->il', self.kraus.conj(), self.kraus)
        return float(np.linalg.norm(gram - np.eye(self.D)))

    def validate(self, tolerance: float = None) -> ChannelReport:
        """
        Valida la completitud del canal.

        Returns:
            ChannelReport: residuo, dimensiones e invariantes (nunca lanza)
        """
        tolerance = CHANNEL_CONFIG['completeness_tolerance'] if tolerance is None else tolerance
        residual = self.completeness_residual()
        return ChannelReport(
            dA=self.dA,
            dB=self.dB,
            rank=self.rank,
            residual=residual,
            passed=residual <= tolerance,
            T=self.T,
            M_A=self.M_A,
            M_B=self.M_B,
            tolerance=tolerance,
        )

    def require_valid(self) -> 'KrausChannel':
        """
        Raises:
            ChannelValidationError: Si el canal no es CPTP dentro de la tolerancia
        """
        report = self.validate()
        if not report.passed:
            raise ChannelValidationError(
                f"Canal '{self.label}' no CPTP: residuo de completitud {report.residual:.3e}",
                residual=report.residual,
            )
        return self

    def apply(self, rho, check: bool = True) -> np.ndarray:
        """
        Aplica el canal a una matriz densidad o a una pila (n, D, D).

        Args:
            rho: Estado de entrada
            check: Validar que la entrada es una matriz densidad

        Raises:
            NonPhysicalStateError: Si la entrada no es un estado válido
        """
        if check:
            m = require_density_matrix(rho, CHANNEL_CONFIG['state_tolerance'])
        else:
            m = as_complex_matrix(rho)
        if m.shape[-2:] != (self.D, self.D):
            raise DimensionError(f"Estado de forma {m.shape[-2:]} incompatible con D = {self.D}")
        return np.einsum('kij,...jl,kml->...im', self.kraus, m, self.kraus.conj(), optimize=True)

    def apply_to_kets(self, psi: np.ndarray) -> np.ndarray:
        """Salidas Φ(|ψ⟩⟨ψ|) para una pila de kets (n, D)."""
        images = np.einsum('kij,nj->nki', self.kraus, psi)
        return np.einsum('nki,nkj->nij', images, images.conj())

    def choi(self) -> np.ndarray:
        """Matriz de Choi Σ_ij E_ij ⊗ Φ(E_ij) (sin normalizar), aplicando el canal a las unidades matriciales."""
        D = self.D
        units = np.eye(D * D, dtype=np.complex128).reshape(D * D, D, D)
        images = self.apply(units, check=False).reshape(D, D, D, D)
        return images.transpose(0, 2, 1, 3).reshape(D * D, D * D)

    def tensor_square_apply(self, omega: np.ndarray) -> np.ndarray:
        """(Φ⊗Φ)(Ω) en el espacio de dos copias ordenado como A, B, A', B'."""
        D = self.D
        w = np.asarray(omega, dtype=np.complex128).reshape(D, D, D, D)
        k = self.kraus
        first = np.einsum('aip,pqrs,akr->iqks', k, w, k.conj(), optimize=True)
        both = np.einsum('bjq,iqks,bls->ijkl', k, first, k.conj(), optimize=True)
        return both.reshape(D * D, D * D)

    def __repr__(self) -> str:
        return f"KrausChannel(label={self.label!r}, dA={self.dA}, dB={self.dB}, rank={self.rank})"
