"""
Familias de canales de dos qubits.

Cada constructor valida el dominio de su parámetro y devuelve un KrausChannel.
"""

import cmath
import math

import numpy as np

from core.exceptions import ParameterDomainError
from .channel_algebra import compose, product_channel, require_unitary, unitary_channel
from .kraus_channel import KrausChannel

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (I2, X, Y, Z)
CZ = np.diag([1, 1, 1, -1]).astype(np.complex128)


def _require_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ParameterDomainError(f"{name} = {value} fuera de [0, 1]")
    return value


def _require_nonnegative(name: str, value: float) -> float:
    value = float(value)
    if value < 0.0 or not math.isfinite(value):
        raise ParameterDomainError(f"{name} = {value} debe ser finito y ≥ 0")
    return value


def correlated_dephasing(gamma: float) -> KrausChannel:
    """Φ(ρ) = (1−γ)ρ + γ(Z⊗Z)ρ(Z⊗Z); u = 1 − 2γ."""
    gamma = _require_unit_interval('gamma', gamma)
    kraus = np.stack([math.sqrt(1.0 - gamma) * np.eye(4), math.sqrt(gamma) * np.kron(Z, Z)])
    return KrausChannel(kraus, 2, 2, label=f"correlated-dephasing(gamma={gamma!r})")


def local_phase_flip(gamma: float) -> KrausChannel:
    """Inversiones de fase independientes con probabilidad γ en cada qubit."""
    gamma = _require_unit_interval('gamma', gamma)
    local = np.stack([math.sqrt(1.0 - gamma) * I2, math.sqrt(gamma) * Z])
    return product_channel(local, local, label=f"local-phase-flip(gamma={gamma!r})")


def amplitude_damping_kraus(gamma: float) -> np.ndarray:
    gamma = _require_unit_interval('gamma', gamma)
    a0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=np.complex128)
    a1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return np.stack([a0, a1])


def local_amplitude_damping(gamma: float) -> KrausChannel:
    """Amortiguamiento de amplitud independiente en cada qubit."""
    local = amplitude_damping_kraus(gamma)
    return product_channel(local, local, label=f"local-amplitude-damping(gamma={float(gamma)!r})")


def depolarizing_kraus(p: float) -> np.ndarray:
    """Kraus de ρ ↦ (1−p)ρ + p·I/2 en un qubit."""
    p = _require_unit_interval('p', p)
    weights = [math.sqrt(1.0 - 0.75 * p)] + [math.sqrt(p / 4.0)] * 3
    return np.stack([w * P for w, P in zip(weights, PAULIS)])


def local_depolarizing(p: float) -> KrausChannel:
    local = depolarizing_kraus(p)
    return product_channel(local, local, label=f"local-depolarizing(p={float(p)!r})")


def global_depolarizing(p: float) -> KrausChannel:
    """ρ ↦ (1−p)ρ + p·I/4 sobre los dos qubits."""
    p = _require_unit_interval('p', p)
    kraus = [math.sqrt(1.0 - 15.0 * p / 16.0) * np.eye(4, dtype=np.complex128)]
    for i, a in enumerate(PAULIS):
        for j, b in enumerate(PAULIS):
            if i or j:
                kraus.append(math.sqrt(p / 16.0) * np.kron(a, b))
    return KrausChannel(np.stack(kraus), 2, 2, label=f"global-depolarizing(p={p!r})")


def controlled_phase_unitary(phi: float) -> np.ndarray:
    return np.diag([1.0, 1.0, 1.0, cmath.exp(1j * phi)]).astype(np.complex128)


def controlled_phase(phi: float) -> KrausChannel:
    """Ad_{CP(φ)}, CP(φ) = diag(1, 1, 1, e^{iφ}); φ se reduce módulo 2π."""
    phi = math.fmod(float(phi), 2 * math.pi)
    if phi < 0.0:
        phi += 2 * math.pi
    return unitary_channel(controlled_phase_unitary(phi), 2, 2, label=f"controlled-phase(phi={phi!r})")


def cz_correlated_dephasing(u: float) -> KrausChannel:
    """Φ_u ∘ Ad_CZ: puerta CZ ideal seguida de desfase correlacionado."""
    u = float(u)
    if not -1.0 <= u <= 1.0:
        raise ParameterDomainError(f"u = {u} fuera de [−1, 1]")
    gamma = (1.0 - u) / 2.0
    channel = compose(correlated_dephasing(gamma), unitary_channel(CZ, 2, 2, label='cz'))
    return KrausChannel(channel.kraus, 2, 2, label=f"cz-correlated-dephasing(u={u!r})")


def _damping_factors(Gamma: float, t: float):
    Gamma = _require_nonnegative('Gamma', Gamma)
    t = float(t)
    decay = math.exp(-Gamma * t * t)
    return math.sqrt(decay), math.sqrt(1.0 - decay)


def phase_damping(Gamma: float, t: float) -> KrausChannel:
    """Desfase de dos qubits con u(t) = e^{−Γt²/2}."""
    u, s = _damping_factors(Gamma, t)
    k0 = np.diag([u, 1.0, 1.0, u]).astype(np.complex128)
    k1 = np.diag([s, 0.0, 0.0, s]).astype(np.complex128)
    return KrausChannel(np.stack([k0, k1]), 2, 2,
                        label=f"phase-damping(Gamma={float(Gamma)!r},t={float(t)!r})")


def cz_phase_damping(g: float, Gamma: float, t: float) -> KrausChannel:
    """Puerta CZ generada con acoplamiento g bajo desfase de parámetro Γ."""
    u, s = _damping_factors(Gamma, t)
    phase = cmath.exp(-1j * g * t)
    k0 = phase * np.diag([u, 1.0, 1.0, cmath.exp(2j * g * t) * u])
    k1 = np.diag([phase * s, 0.0, 0.0, np.conj(phase) * s])
    return KrausChannel(np.stack([k0, k1]).astype(np.complex128), 2, 2,
                        label=f"cz-phase-damping(g={float(g)!r},Gamma={float(Gamma)!r},t={float(t)!r})")


def mixed_unitary(p: float, u1, u2) -> KrausChannel:
    """ρ ↦ p U₁ρU₁† + (1−p) U₂ρU₂†."""
    p = _require_unit_interval('p', p)
    u1 = require_unitary(u1, 4)
    u2 = require_unitary(u2, 4)
    kraus = np.stack([math.sqrt(p) * u1, math.sqrt(1.0 - p) * u2])
    return KrausChannel(kraus, 2, 2, label=f"mixed-unitary(p={p!r})")
