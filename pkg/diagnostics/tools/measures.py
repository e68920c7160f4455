"""
Medidas de entrelazamiento y funcionales de pureza de estados bipartitos.

Todas las funciones aceptan una matriz densidad o una pila (n, D, D) y
devuelven un float o un arreglo (n,). Son los integrandos puntuales de
todos los diagnósticos promediados.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Union

import numpy as np

from core.exceptions import DimensionError, NonPhysicalStateError
from core.linalg import (
    as_complex_matrix,
    hermitian_eigenvalues,
    partial_trace,
    partial_transpose_B,
    psd_sqrt,
    purity,
    require_density_matrix,
    trace_norm_hermitian,
)
from diagnostics.config import CHANNEL_CONFIG, MC_CONFIG

logger = logging.getLogger(__name__)

Scalar = Union[float, np.ndarray]

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)


def _as_state(rho, dim: int = None, check: bool = True) -> np.ndarray:
    m = require_density_matrix(rho, CHANNEL_CONFIG['state_tolerance']) if check else as_complex_matrix(rho)
    if dim is not None and m.shape[-2:] != (dim, dim):
        raise DimensionError(f"Se esperaba un estado {dim}×{dim}, forma {m.shape[-2:]}")
    return m


def _scalar(value: np.ndarray) -> Scalar:
    return float(value) if np.ndim(value) == 0 else value


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y), conjugación en la base computacional."""
    return SPIN_FLIP @ np.conj(rho) @ SPIN_FLIP


def concurrence(rho, check: bool = True) -> Scalar:
    """
    Concurrencia de dos qubits por la vía hermítica.

    Los r_i son las raíces de los autovalores de √ρ·ρ̃·√ρ en orden
    descendente; los autovalores por debajo del suelo espectral se toman
    como 0 antes de la raíz.

    Raises:
        DimensionError: Si el estado no es 4×4
        NonPhysicalStateError: Si el estado no es una matriz densidad
    """
    m = _as_state(rho, 4, check)
    root = psd_sqrt(m)
    product = root @ spin_flip(m) @ root
    product = 0.5 * (product + np.conj(np.swapaxes(product, -1, -2)))
    values = hermitian_eigenvalues(product)
    values = np.where(values < MC_CONFIG['spectral_floor'], 0.0, values)
    r = np.sqrt(values)
    value = np.maximum(0.0, r[..., 0] - r[..., 1] - r[..., 2] - r[..., 3])
    return _scalar(value)


def negativity(rho, dA: int = 2, dB: int = 2, check: bool = True) -> Scalar:
    """N(ρ) = (‖ρ^{T_B}‖₁ − 1)/2, recortada a ≥ 0."""
    m = _as_state(rho, dA * dB, check)
    norm = np.asarray(trace_norm_hermitian(partial_transpose_B(m, dA, dB)))
    return _scalar(np.maximum(0.0, (norm - 1.0) / 2.0))


def linear_entropy(rho, dA: int = 2, dB: int = 2, check: bool = True) -> Scalar:
    """E_L(ρ) = 1 − Tr(ρ_A²)."""
    m = _as_state(rho, dA * dB, check)
    return _scalar(1.0 - np.asarray(purity(partial_trace(m, dA, dB, keep='A'))))


def global_impurity(rho, check: bool = True) -> Scalar:
    """1 − Tr(ρ²)."""
    m = _as_state(rho, None, check)
    return _scalar(1.0 - np.asarray(purity(m)))


def delta_P(rho, dA: int = 2, dB: int = 2, traced: str = 'B', check: bool = True) -> Scalar:
    """
    Pureza global menos pureza reducida.

    Args:
        traced: Subsistema que se traza ('B' → Tr ρ² − Tr ρ_A², 'A' → Tr ρ² − Tr ρ_B²)
    """
    if traced not in ('A', 'B'):
        raise ValueError(f"Subsistema '{traced}' no válido, use 'A' o 'B'")
    m = _as_state(rho, dA * dB, check)
    keep = 'A' if traced == 'B' else 'B'
    reduced = partial_trace(m, dA, dB, keep=keep)
    return _scalar(np.asarray(purity(m)) - np.asarray(purity(reduced)))


def tangle(rho, check: bool = True) -> Scalar:
    return _scalar(np.asarray(concurrence(rho, check)) ** 2)


def concurrence_pure(psi) -> Scalar:
    """
    Concurrencia de un estado puro de dos qubits: 2|det A| con A la matriz 2×2 de coeficientes.

    Raises:
        NonPhysicalStateError: Si el vector no está normalizado
    """
    v = np.asarray(psi, dtype=np.complex128)
    if v.shape[-2:] == (4, 1):
        v = v[..., 0]
    if v.shape[-1] != 4:
        raise DimensionError(f"Se esperaba un vector de dimensión 4, forma {v.shape}")
    norms = np.linalg.norm(v, axis=-1)
    if np.max(np.abs(norms - 1.0)) > CHANNEL_CONFIG['state_tolerance']:
        raise NonPhysicalStateError("El vector de estado no está normalizado")
    coefficients = v.reshape(v.shape[:-1] + (2, 2))
    det = coefficients[..., 0, 0] * coefficients[..., 1, 1] - coefficients[..., 0, 1] * coefficients[..., 1, 0]
    return _scalar(2.0 * np.abs(det))


@dataclass(frozen=True)
class StateMeasures:
    """Medidas de un estado de dos qubits."""
    concurrence: float
    negativity: float
    linear_entropy: float
    tangle: float
    delta_P_A: float
    delta_P_B: float

    def as_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def state_measures(rho) -> StateMeasures:
    """Calcula todas las medidas de un estado 4×4 (delta_P_A traza A, delta_P_B traza B)."""
    m = _as_state(rho, 4)
    c = concurrence(m, check=False)
    return StateMeasures(
        concurrence=c,
        negativity=negativity(m, check=False),
        linear_entropy=linear_entropy(m, check=False),
        tangle=c * c,
        delta_P_A=delta_P(m, traced='A', check=False),
        delta_P_B=delta_P(m, traced='B', check=False),
    )
