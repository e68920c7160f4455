"""
Álgebra de canales: composición, mezclas convexas, canal de error respecto
a una unitaria objetivo, productos locales y canales aleatorios de Stinespring.
"""

import logging
from typing import Sequence

import numpy as np

from core.exceptions import DimensionError, ParameterDomainError
from core.linalg import as_complex_matrix, dagger, tensor_product
from core.sampling import SampleStream, haar_unitary
from diagnostics.config import CHANNEL_CONFIG
from .kraus_channel import KrausChannel

logger = logging.getLogger(__name__)


def _require_same_dims(a: KrausChannel, b: KrausChannel) -> None:
    if (a.dA, a.dB) != (b.dA, b.dB):
        raise DimensionError(f"Dimensiones incompatibles: {a.dA}×{a.dB} frente a {b.dA}×{b.dB}")


def require_unitary(u, dim: int = None) -> np.ndarray:
    """
    Valida una unitaria (‖U U† − I‖_F ≤ tolerancia).

    Raises:
        DimensionError: Si no es cuadrada o no tiene la dimensión esperada
        ParameterDomainError: Si no es unitaria
    """
    m = as_complex_matrix(u)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"Se esperaba una unitaria cuadrada, forma {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise DimensionError(f"Unitaria de dimensión {m.shape[0]}, se esperaba {dim}")
    residual = float(np.linalg.norm(m @ dagger(m) - np.eye(m.shape[0])))
    if residual > CHANNEL_CONFIG['unitary_tolerance']:
        raise ParameterDomainError(f"La matriz objetivo no es unitaria (residuo {residual:.3e})")
    return m


def identity_channel(dA: int = 2, dB: int = 2) -> KrausChannel:
    return KrausChannel(np.eye(dA * dB, dtype=np.complex128), dA, dB, label='identity')


def unitary_channel(u, dA: int = 2, dB: int = 2, label: str = 'unitary') -> KrausChannel:
    """Conjugación Ad_U(ρ) = U ρ U†."""
    return KrausChannel(require_unitary(u, dA * dB), dA, dB, label=label)


def local_unitary_channel(u_a, u_b, label: str = 'local-unitary') -> KrausChannel:
    """Ad_{U_A ⊗ U_B}."""
    u_a = require_unitary(u_a)
    u_b = require_unitary(u_b)
    return unitary_channel(tensor_product(u_a, u_b), u_a.shape[0], u_b.shape[0], label=label)


def compose(after: KrausChannel, before: KrausChannel) -> KrausChannel:
    """after ∘ before, con Kraus {after_β · before_α}."""
    _require_same_dims(after, before)
    products = np.einsum('bij,ajk->baik', after.kraus, before.kraus)
    D = after.D
    return KrausChannel(products.reshape(-1, D, D), after.dA, after.dB,
                        label=f"{after.label}∘{before.label}")


def mix(p: float, a: KrausChannel, b: KrausChannel) -> KrausChannel:
    """
    Mezcla convexa p·a + (1−p)·b.

    Raises:
        ParameterDomainError: Si p ∉ [0, 1]
    """
    if not 0.0 <= p <= 1.0:
        raise ParameterDomainError(f"Peso de mezcla p = {p} fuera de [0, 1]")
    _require_same_dims(a, b)
    parts = []
    if p > 0.0:
        parts.append(np.sqrt(p) * a.kraus)
    if p < 1.0:
        parts.append(np.sqrt(1.0 - p) * b.kraus)
    return KrausChannel(np.concatenate(parts, axis=0), a.dA, a.dB,
                        label=f"mix({p!r},{a.label},{b.label})")


def error_channel(ch: KrausChannel, target_unitary) -> KrausChannel:
    """Canal de error Ad_{U†} ∘ Φ respecto a la unitaria objetivo U."""
    u = require_unitary(target_unitary, ch.D)
    inverse = KrausChannel(dagger(u), ch.dA, ch.dB, label='target†')
    return compose(inverse, ch)


def product_channel(a_kraus: Sequence, b_kraus: Sequence, label: str = None) -> KrausChannel:
    """
    Canal producto Λ_A ⊗ Λ_B con Kraus {A_i ⊗ B_j}.

    Args:
        a_kraus: Operadores de Kraus locales de A (pila o lista de dA×dA)
        b_kraus: Operadores de Kraus locales de B (pila o lista de dB×dB)
    """
    a = as_complex_matrix(np.asarray(a_kraus))
    b = as_complex_matrix(np.asarray(b_kraus))
    if a.ndim == 2:
        a = a[None]
    if b.ndim == 2:
        b = b[None]
    dA, dB = a.shape[-1], b.shape[-1]
    kraus = tensor_product(a[:, None], b[None, :]).reshape(-1, dA * dB, dA * dB)
    return KrausChannel(kraus, dA, dB, label=label or 'product')


def local_fidelity_invariant(kraus: Sequence) -> float:
    """x = Σ |Tr A_i|² de un canal local."""
    stack = as_complex_matrix(np.asarray(kraus))
    if stack.ndim == 2:
        stack = stack[None]
    return float(np.sum(np.abs(np.trace(stack, axis1=1, axis2=2)) ** 2))


def channels_equal(a: KrausChannel, b: KrausChannel, tolerance: float = None) -> bool:
    """Igualdad extensional: las matrices de Choi coinciden (norma de Frobenius)."""
    tolerance = CHANNEL_CONFIG['equality_tolerance'] if tolerance is None else tolerance
    if (a.dA, a.dB) != (b.dA, b.dB):
        return False
    return float(np.linalg.norm(a.choi() - b.choi())) <= tolerance


def _stinespring_kraus(d: int, env_dim: int, stream: SampleStream) -> np.ndarray:
    isometry = haar_unitary(d * env_dim, stream)[:, :d]
    return isometry.reshape(d, env_dim, d).transpose(1, 0, 2)


def random_stinespring_channel(dA: int, dB: int, stream: SampleStream,
                               env_dim: int = None) -> KrausChannel:
    """Canal aleatorio: isometría de Haar C^D → C^D ⊗ C^E seguida de la traza del entorno."""
    env_dim = env_dim or CHANNEL_CONFIG['stinespring_env_dim']
    kraus = _stinespring_kraus(dA * dB, env_dim, stream)
    return KrausChannel(kraus, dA, dB, label=f"stinespring(E={env_dim})")


def random_local_kraus(d: int, stream: SampleStream, env_dim: int = None) -> np.ndarray:
    """Operadores de Kraus (E, d, d) de un canal local aleatorio de Stinespring."""
    env_dim = env_dim or CHANNEL_CONFIG['stinespring_env_dim']
    return _stinespring_kraus(d, env_dim, stream)
