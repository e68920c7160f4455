"""
Curvas analíticas de referencia de las familias de canales.

Se usan como oráculos en `validate` y en los tests: los valores Monte Carlo y
las contracciones de dos copias deben reproducirlas.
"""

import math

PI2_16 = math.pi ** 2 / 16


def dephasing_u(gamma: float) -> float:
    return 1.0 - 2.0 * gamma


def phase_damping_u(Gamma: float, t: float) -> float:
    return math.exp(-Gamma * t * t / 2.0)


# Puerta de fase controlada CP(φ)

def controlled_phase_e_C(phi: float) -> float:
    return PI2_16 * abs(math.sin(phi / 2.0))


def controlled_phase_e_N(phi: float) -> float:
    return 0.5 * controlled_phase_e_C(phi)


def controlled_phase_e_L(phi: float) -> float:
    return (2.0 / 9.0) * math.sin(phi / 2.0) ** 2


def controlled_phase_chi_F(phi: float) -> float:
    return -(2.0 / 45.0) * math.sin(phi / 2.0) ** 2


# CZ con desfase correlacionado

def noisy_cz_e_C(u: float) -> float:
    return u * PI2_16


def noisy_cz_e_L(u: float) -> float:
    return 1.0 / 3.0 - u * u / 9.0


def noisy_cz_e_C_from_fidelity(f_avg: float) -> float:
    """e_C(Φ_u^CZ) = (π²/32)(5 F_avg − 3) con F_avg relativa a CZ."""
    return (math.pi ** 2 / 32.0) * (5.0 * f_avg - 3.0)


def cz_phase_damping_e_C(g: float, Gamma: float, t: float) -> float:
    return phase_damping_u(Gamma, t) * PI2_16 * abs(math.sin(g * t))


# Canales separables

def correlated_dephasing_e_L(gamma: float) -> float:
    u = dephasing_u(gamma)
    return (1.0 - u * u) / 3.0


def correlated_dephasing_f_avg(gamma: float) -> float:
    return 0.6 + 0.4 * dephasing_u(gamma)


def correlated_dephasing_f_prod(gamma: float) -> float:
    return 5.0 / 9.0 + 4.0 * dephasing_u(gamma) / 9.0


def correlated_dephasing_chi_F(gamma: float) -> float:
    return 4.0 * gamma / 45.0


def local_phase_flip_e_L(gamma: float) -> float:
    return 4.0 * gamma * (1.0 - gamma) / 3.0


def local_phase_flip_chi_F(gamma: float) -> float:
    return 4.0 * gamma * (4.0 * gamma - 3.0) / 45.0


def amplitude_damping_e_L(gamma: float) -> float:
    return 2.0 * gamma * (1.0 - gamma) / 3.0


def amplitude_damping_chi_F(gamma: float) -> float:
    q = 1.0 + math.sqrt(1.0 - gamma)
    return -(q * q - 1.0) * (4.0 - q * q) / 45.0


def local_depolarizing_e_L(p: float) -> float:
    return p - p * p / 2.0


def local_depolarizing_chi_F(p: float) -> float:
    return p * (p - 1.0) / 5.0


def global_depolarizing_f_avg(p: float) -> float:
    return 1.0 - 0.75 * p


def phase_damping_e_L(Gamma: float, t: float) -> float:
    u = phase_damping_u(Gamma, t)
    return (1.0 - u * u) / 3.0


# Canales producto

def product_chi_F_from_fidelities(f_a: float, f_b: float) -> float:
    return (2.0 + 4.0 * f_a * f_b - 3.0 * f_a - 3.0 * f_b) / 5.0


def product_chi_F_from_traces(x_a: float, x_b: float) -> float:
    """Forma equivalente con x = Σ|Tr A_i|² de cada factor local."""
    return (8.0 + 2.0 * x_a * x_b - 5.0 * x_a - 5.0 * x_b) / 90.0


# Órbitas de dos qubits

def orbit_purity(theta: float) -> float:
    return 1.0 - 0.5 * math.sin(2.0 * theta) ** 2


def input_concurrence(theta: float) -> float:
    return math.sin(2.0 * theta)


def input_negativity(theta: float) -> float:
    return 0.5 * math.sin(2.0 * theta)


def input_linear_entropy(theta: float) -> float:
    return 0.5 * math.sin(2.0 * theta) ** 2
