"""
Operadores de segundo momento en el espacio de dos copias (orden A, B, A', B')
y sus contracciones con Φ⊗Φ.

Ω_⊗ promedia (|ψ_Aψ_B⟩⟨ψ_Aψ_B|)^{⊗2} sobre entradas producto de Haar y
Ω(μ) promedia la órbita local-unitaria de un vector de Schmidt de pureza
reducida μ. Las cantidades promediadas de la salida son trazas
Tr[(Φ⊗Φ)(Ω) X] con X una combinación de intercambios.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from core.exceptions import DimensionError, ParameterDomainError
from core.linalg import swap_operator
from diagnostics.config import CHANNEL_CONFIG
from diagnostics.providers.channels import KrausChannel

logger = logging.getLogger(__name__)

_MU_SLACK = 1e-12


@dataclass(frozen=True)
class TracedPair:
    """Valor de un funcional δ_P en sus dos variantes (traza sobre A o sobre B)."""
    traced_A: float
    traced_B: float

    @property
    def max(self) -> float:
        return max(self.traced_A, self.traced_B)


def _require_local_dimension(d: int) -> int:
    if d < 2:
        raise DimensionError(f"Se necesita d ≥ 2, se recibió {d}")
    return int(d)


def _require_purity(d: int, mu: float) -> float:
    mu = float(mu)
    if mu < 1.0 / d - _MU_SLACK or mu > 1.0 + _MU_SLACK:
        raise ParameterDomainError(f"μ = {mu} fuera de [1/{d}, 1]")
    return min(max(mu, 1.0 / d), 1.0)


@lru_cache(maxsize=None)
def _omega_product(d: int) -> np.ndarray:
    identity = np.eye(d ** 4, dtype=np.complex128)
    s_a = swap_operator(d, "AA'")
    s_b = swap_operator(d, "BB'")
    omega = (identity + s_a) @ (identity + s_b) / (d * d * (d + 1) ** 2)
    omega.setflags(write=False)
    return omega


def omega_product(d: int) -> np.ndarray:
    """Ω_⊗ = (1 + S_AA')(1 + S_BB') / (d²(d+1)²)."""
    return _omega_product(_require_local_dimension(d))


@lru_cache(maxsize=256)
def _omega_mu(d: int, mu: float) -> np.ndarray:
    identity = np.eye(d ** 4, dtype=np.complex128)
    s_a = swap_operator(d, "AA'")
    s_b = swap_operator(d, "BB'")
    s_both = swap_operator(d, 'both')
    diagonal = d * d + 1.0 - 2.0 * mu * d
    crossed = (d * d + 1.0) * mu - 2.0 * d
    omega = (diagonal * (identity + s_both) + crossed * (s_a + s_b)) / (d * d * (d * d - 1.0) ** 2)
    omega.setflags(write=False)
    return omega


def omega_mu(d: int, mu: float) -> np.ndarray:
    """
    Segundo momento de la órbita de pureza reducida μ.

    Ω(μ) = [(d²+1−2μd)(1 + S_AA'S_BB') + ((d²+1)μ − 2d)(S_AA' + S_BB')] / (d²(d²−1)²)

    Raises:
        ParameterDomainError: Si μ ∉ [1/d, 1]
    """
    d = _require_local_dimension(d)
    return _omega_mu(d, _require_purity(d, mu))


def _require_equal_dims(ch: KrausChannel) -> int:
    if ch.dA != ch.dB:
        raise DimensionError(f"Se necesitan dimensiones locales iguales, canal {ch.dA}×{ch.dB}")
    return ch.dA


def contraction(ch: KrausChannel, omega: np.ndarray, observable: np.ndarray) -> float:
    """
    Σ_αβ Tr[(K_α⊗K_β) Ω (K_α⊗K_β)† X].

    Raises:
        ValueError: Si el residuo imaginario supera la tolerancia
    """
    return _trace_with(ch.tensor_square_apply(omega), observable)


def orbit_image(ch: KrausChannel, mu: float) -> np.ndarray:
    """(Φ⊗Φ)(Ω(μ))."""
    d = _require_equal_dims(ch)
    return ch.tensor_square_apply(omega_mu(d, mu))


def _trace_with(image: np.ndarray, observable: np.ndarray) -> float:
    value = np.sum(image * observable.T)
    if abs(value.imag) > CHANNEL_CONFIG['contraction_imaginary']:
        raise ValueError(f"Contracción de dos copias con parte imaginaria {value.imag:.3e}")
    return float(value.real)


@dataclass(frozen=True)
class OrbitContractions:
    """Promedios de pureza de la salida sobre una órbita (Tr ρ², Tr ρ_A², Tr ρ_B²)."""
    mu: float
    global_purity: float
    purity_A: float
    purity_B: float

    @property
    def linear_entropy(self) -> float:
        return 1.0 - self.purity_A

    @property
    def global_impurity(self) -> float:
        return 1.0 - self.global_purity

    @property
    def delta_P(self) -> TracedPair:
        return TracedPair(
            traced_A=self.global_purity - self.purity_B,
            traced_B=self.global_purity - self.purity_A,
        )


def orbit_contractions(ch: KrausChannel, mu: float) -> OrbitContractions:
    """Las tres contracciones de (Φ⊗Φ)(Ω(μ)) con S_AA'S_BB', S_AA' y S_BB'."""
    d = _require_equal_dims(ch)
    return _contractions(orbit_image(ch, mu), d, float(mu))


def _contractions(image: np.ndarray, d: int, mu: float) -> OrbitContractions:
    return OrbitContractions(
        mu=mu,
        global_purity=_trace_with(image, swap_operator(d, 'both')),
        purity_A=_trace_with(image, swap_operator(d, "AA'")),
        purity_B=_trace_with(image, swap_operator(d, "BB'")),
    )


def product_contractions(ch: KrausChannel) -> OrbitContractions:
    """Contracciones de (Φ⊗Φ)(Ω_⊗): promedios sobre entradas producto."""
    d = _require_equal_dims(ch)
    return _contractions(ch.tensor_square_apply(omega_product(d)), d, 1.0)
