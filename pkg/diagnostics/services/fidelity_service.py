"""
Servicio de diagnósticos de fidelidad entrada-salida.

Las fórmulas analíticas usan solo los invariantes T, M_A, M_B del canal;
las estimaciones Monte Carlo promedian ⟨ψ|Φ(|ψ⟩⟨ψ|)|ψ⟩ = Σ_α |⟨ψ|K_α|ψ⟩|²
sobre el ensamble correspondiente.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.exceptions import DimensionError, ParameterDomainError
from core.sampling import (
    HaarStateSampler,
    MonteCarloEstimate,
    OrbitStateSampler,
    ProductStateSampler,
    SampleStream,
    SchmidtOrbit,
    mc_mean,
)
from diagnostics.providers.channels import KrausChannel, error_channel
from diagnostics.providers.channels.channel_algebra import local_fidelity_invariant


@dataclass(frozen=True)
class FidelityIntegrand:
    """Fidelidad entrada-salida por muestra para una pila de kets (n, D)."""
    kraus: np.ndarray

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        amplitudes = np.einsum('ni,kij,nj->nk', psi.conj(), self.kraus, psi, optimize=True)
        return np.sum(np.abs(amplitudes) ** 2, axis=1)


@dataclass(frozen=True)
class FidelityProfile:
    """
    Perfil de fidelidad de un canal.

    Attributes:
        f_avg: Fidelidad media sobre estados de Haar
        f_prod: Fidelidad media sobre estados producto
        chi_F: Sesgo f_avg − f_prod
        orbit_curve: Pares (μ, F_μ) de la fidelidad por órbita
        reference: Descriptor de la unitaria objetivo (si es relativa)
    """
    f_avg: float
    f_prod: float
    chi_F: float
    orbit_curve: List[Tuple[float, float]] = field(default_factory=list)
    reference: Optional[str] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            'f_avg': self.f_avg,
            'f_prod': self.f_prod,
            'chi_F': self.chi_F,
            'orbit_curve': [list(point) for point in self.orbit_curve],
            'reference': self.reference,
        }


class FidelityService:

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    # ------------------------------------------------------------------
    # Fórmulas analíticas
    # ------------------------------------------------------------------

    def favg_analytic(self, ch: KrausChannel) -> float:
        """F_avg = (D + T) / (D(D + 1))."""
        D = ch.D
        return (D + ch.T) / (D * (D + 1))

    def fprod_analytic(self, ch: KrausChannel) -> float:
        """F_prod = (D + T + M_A + M_B) / (D(dA + 1)(dB + 1))."""
        return (ch.D + ch.T + ch.M_A + ch.M_B) / (ch.D * (ch.dA + 1) * (ch.dB + 1))

    def chi_F(self, ch: KrausChannel) -> float:
        """Sesgo de fidelidad χ_F = F_avg − F_prod."""
        return self.favg_analytic(ch) - self.fprod_analytic(ch)

    def chi_F_product(self, f_a: float, f_b: float) -> float:
        """
        χ_F de un canal producto a partir de las fidelidades medias de un qubit.

        Raises:
            ParameterDomainError: Si f_a o f_b ∉ [0, 1]
        """
        for name, value in (('f_a', f_a), ('f_b', f_b)):
            if not 0.0 <= value <= 1.0:
                raise ParameterDomainError(f"{name} = {value} fuera de [0, 1]")
        return (2.0 + 4.0 * f_a * f_b - 3.0 * f_a - 3.0 * f_b) / 5.0

    def local_favg(self, kraus: Sequence) -> float:
        """Fidelidad media de un canal local: (d + Σ|Tr A_i|²) / (d(d + 1))."""
        d = np.asarray(kraus).shape[-1]
        return (d + local_fidelity_invariant(kraus)) / (d * (d + 1))

    def _require_orbit(self, ch: KrausChannel, mu: float) -> int:
        if ch.dA != ch.dB:
            raise DimensionError(f"La fidelidad por órbita requiere dA = dB, canal {ch.dA}×{ch.dB}")
        d = ch.dA
        if d < 2:
            raise DimensionError("La fidelidad por órbita requiere d ≥ 2")
        if mu < 1.0 / d - 1e-12 or mu > 1.0 + 1e-12:
            raise ParameterDomainError(f"μ = {mu} fuera de [1/{d}, 1]")
        return d

    def forbit_analytic(self, ch: KrausChannel, mu: float) -> float:
        """F_μ = F_prod + ((d² + 1)/(d − 1)²)(1 − μ)·χ_F."""
        d = self._require_orbit(ch, mu)
        return self.fprod_analytic(ch) + ((d * d + 1) / (d - 1) ** 2) * (1.0 - mu) * self.chi_F(ch)

    def forbit_raw(self, ch: KrausChannel, mu: float) -> float:
        """Expresión directa de F_μ en términos de T, M_A y M_B."""
        d = self._require_orbit(ch, mu)
        d2 = d * d
        global_term = (d2 + ch.T) * (1.0 + 1.0 / d2 - 2.0 * mu / d)
        local_term = (ch.M_A + ch.M_B) * ((1.0 + 1.0 / d2) * mu - 2.0 / d)
        return (global_term + local_term) / (d2 - 1) ** 2

    def forbit_theta(self, ch: KrausChannel, theta: float) -> float:
        """F_θ para dos qubits con μ = 1 − ½sin²2θ."""
        orbit = SchmidtOrbit.from_theta(theta)
        if ch.dA != 2 or ch.dB != 2:
            raise DimensionError("El ángulo de Schmidt solo aplica a canales de dos qubits")
        return self.forbit_analytic(ch, orbit.purity)

    # ------------------------------------------------------------------
    # Estimaciones Monte Carlo
    # ------------------------------------------------------------------

    def favg_mc(self, ch: KrausChannel, n: int, stream: SampleStream, workers: int = 1) -> MonteCarloEstimate:
        return mc_mean(FidelityIntegrand(ch.kraus), HaarStateSampler(ch.D), n, stream, workers)

    def fprod_mc(self, ch: KrausChannel, n: int, stream: SampleStream, workers: int = 1) -> MonteCarloEstimate:
        return mc_mean(FidelityIntegrand(ch.kraus), ProductStateSampler(ch.dA, ch.dB), n, stream, workers)

    def forbit_mc(self, ch: KrausChannel, orbit: SchmidtOrbit, n: int, stream: SampleStream,
                  workers: int = 1) -> MonteCarloEstimate:
        if ch.dA != ch.dB or ch.dA != orbit.d:
            raise DimensionError(f"Órbita de dimensión {orbit.d} incompatible con canal {ch.dA}×{ch.dB}")
        return mc_mean(FidelityIntegrand(ch.kraus), OrbitStateSampler(orbit), n, stream, workers)

    # ------------------------------------------------------------------
    # Perfiles
    # ------------------------------------------------------------------

    def profile(self, ch: KrausChannel, mu_points: int = 9, reference: str = None) -> FidelityProfile:
        """Perfil analítico completo; la curva por órbita cubre μ ∈ [1/d, 1] y termina en μ = 1."""
        f_avg = self.favg_analytic(ch)
        f_prod = self.fprod_analytic(ch)
        curve = []
        if ch.dA == ch.dB >= 2:
            d = ch.dA
            for mu in np.linspace(1.0 / d, 1.0, mu_points):
                mu = float(mu)
                curve.append((mu, self.forbit_analytic(ch, mu)))
            curve[-1] = (1.0, f_prod)
        return FidelityProfile(f_avg=f_avg, f_prod=f_prod, chi_F=f_avg - f_prod,
                               orbit_curve=curve, reference=reference)

    def relative_profile(self, ch: KrausChannel, target, reference: str = 'target') -> FidelityProfile:
        """
        Perfil del canal de error Ad_{U†} ∘ Φ.

        Raises:
            ParameterDomainError: Si la unitaria objetivo no es unitaria
        """
        self.logger.debug(f"Perfil relativo de {ch.label} respecto a {reference}")
        return self.profile(error_channel(ch, target), reference=reference)

    def maximally_entangled_fidelity(self, ch: KrausChannel) -> float:
        """F_μ en μ = 1/d (órbita máximamente entrelazada)."""
        return self.forbit_analytic(ch, 1.0 / ch.dA)

