"""
Servicio de variación de entrelazamiento sobre órbitas de Schmidt.

Para dos qubits la órbita se fija por el ángulo θ ∈ [0, π/4], con valores
de entrada C = sin 2θ, N = ½ sin 2θ y E_L = ½ sin² 2θ. Las contracciones
analíticas de E_L y δ_P aceptan cualquier d a través de μ.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple

from core.exceptions import DimensionError
from core.sampling import MonteCarloEstimate, OrbitStateSampler, SampleStream, SchmidtOrbit
from diagnostics.providers.channels import KrausChannel
from diagnostics.tools import reference_curves as curves
from diagnostics.tools.two_copy import TracedPair, orbit_contractions
from .entangling_power_service import EntanglingPowerService


def _shift(estimate: MonteCarloEstimate, offset: float) -> MonteCarloEstimate:
    return MonteCarloEstimate(mean=estimate.mean - offset, stderr=estimate.stderr, n=estimate.n,
                              seed=estimate.seed, stream_id=estimate.stream_id)


@dataclass(frozen=True)
class OrbitVariationReport:
    """
    Variaciones de entrelazamiento de un canal sobre la órbita de ángulo θ.

    Attributes:
        theta, mu: Ángulo de Schmidt y pureza reducida de la entrada
        delta_eC, delta_eN, delta_eL: Estimaciones MC (salida − entrada)
        delta_eC2: Estimación MC de C²_out − sin² 2θ
        deltaP_orbit: δ̄_P(Φ, θ) analítico (máximo de las dos variantes)
        delta_eL_analytic: Δe_L por contracción
        lower, upper: Cotas de Δe_C
        eN_upper: Cota superior de Δe_N
        global_impurity: 1 − Tr ρ² promedio analítico
    """
    theta: float
    mu: float
    delta_eC: MonteCarloEstimate
    delta_eN: MonteCarloEstimate
    delta_eL: MonteCarloEstimate
    delta_eC2: MonteCarloEstimate
    deltaP_orbit: float
    delta_eL_analytic: float
    lower: float
    upper: float
    eN_upper: float
    global_impurity: float

    def within_bounds(self, sigmas: float = 3.0) -> bool:
        slack = sigmas * self.delta_eC.stderr + 1e-12
        return self.lower - slack <= self.delta_eC.mean <= self.upper + slack

    def as_dict(self) -> Dict[str, Any]:
        return {
            'theta': self.theta,
            'mu': self.mu,
            'delta_eC': self.delta_eC.as_dict(),
            'delta_eN': self.delta_eN.as_dict(),
            'delta_eL': self.delta_eL.as_dict(),
            'delta_eC2': self.delta_eC2.as_dict(),
            'deltaP_orbit': self.deltaP_orbit,
            'delta_eL_analytic': self.delta_eL_analytic,
            'lower': self.lower,
            'upper': self.upper,
            'eN_upper': self.eN_upper,
            'global_impurity': self.global_impurity,
        }


class OrbitVariationService:

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.entangling_power = EntanglingPowerService()

    def _require_two_qubit(self, ch: KrausChannel) -> None:
        if (ch.dA, ch.dB) != (2, 2):
            raise DimensionError(f"La variación por ángulo requiere dos qubits, canal {ch.dA}×{ch.dB}")

    # ------------------------------------------------------------------
    # Analítico (cualquier d)
    # ------------------------------------------------------------------

    def EL_out_orbit_analytic(self, ch: KrausChannel, mu: float) -> float:
        """1 − Σ Tr[(K_α⊗K_β) Ω(μ) (K_α⊗K_β)† S_AA']."""
        return orbit_contractions(ch, mu).linear_entropy

    def delta_eL_analytic(self, ch: KrausChannel, mu: float) -> float:
        """Δe_L = E_L,out − (1 − μ)."""
        return self.EL_out_orbit_analytic(ch, mu) - (1.0 - mu)

    def delta_P_orbit_analytic(self, ch: KrausChannel, mu: float) -> TracedPair:
        return orbit_contractions(ch, mu).delta_P

    def global_impurity_orbit_analytic(self, ch: KrausChannel, mu: float) -> float:
        return orbit_contractions(ch, mu).global_impurity

    # ------------------------------------------------------------------
    # Cotas de dos qubits
    # ------------------------------------------------------------------

    def delta_eC_bounds(self, ch: KrausChannel, theta: float) -> Tuple[float, float]:
        """2·max(0, δ̄_P(Φ,θ)) − sin 2θ ≤ Δe_C ≤ √(2 E_L,out) − sin 2θ."""
        self._require_two_qubit(ch)
        orbit = SchmidtOrbit.from_theta(theta)
        contractions = orbit_contractions(ch, orbit.purity)
        c_in = curves.input_concurrence(theta)
        lower = 2.0 * max(0.0, contractions.delta_P.max) - c_in
        upper = math.sqrt(2.0 * max(0.0, contractions.linear_entropy)) - c_in
        return lower, upper

    def delta_eN_upper(self, ch: KrausChannel, theta: float) -> float:
        """Δe_N ≤ ½√(2 E_L,out) − ½ sin 2θ."""
        self._require_two_qubit(ch)
        orbit = SchmidtOrbit.from_theta(theta)
        el_out = orbit_contractions(ch, orbit.purity).linear_entropy
        return 0.5 * math.sqrt(2.0 * max(0.0, el_out)) - curves.input_negativity(theta)

    # ------------------------------------------------------------------
    # Monte Carlo
    # ------------------------------------------------------------------

    def _orbit_estimates(self, ch: KrausChannel, theta: float, measures, n: int, stream: SampleStream,
                         workers: int = 1) -> Dict[str, MonteCarloEstimate]:
        self._require_two_qubit(ch)
        sampler = OrbitStateSampler(SchmidtOrbit.from_theta(theta))
        return self.entangling_power.output_estimates(ch, measures, n, stream, workers, sampler=sampler)

    def delta_eC_mc(self, ch: KrausChannel, theta: float, n: int, stream: SampleStream,
                    workers: int = 1) -> MonteCarloEstimate:
        estimate = self._orbit_estimates(ch, theta, ('concurrence',), n, stream, workers)['concurrence']
        return _shift(estimate, curves.input_concurrence(theta))

    def delta_eN_mc(self, ch: KrausChannel, theta: float, n: int, stream: SampleStream,
                    workers: int = 1) -> MonteCarloEstimate:
        estimate = self._orbit_estimates(ch, theta, ('negativity',), n, stream, workers)['negativity']
        return _shift(estimate, curves.input_negativity(theta))

    def delta_eL_mc(self, ch: KrausChannel, theta: float, n: int, stream: SampleStream,
                    workers: int = 1) -> MonteCarloEstimate:
        estimate = self._orbit_estimates(ch, theta, ('linear_entropy',), n, stream, workers)['linear_entropy']
        return _shift(estimate, curves.input_linear_entropy(theta))

    def delta_eC2_mc(self, ch: KrausChannel, theta: float, n: int, stream: SampleStream,
                     workers: int = 1) -> MonteCarloEstimate:
        estimate = self._orbit_estimates(ch, theta, ('concurrence_sq',), n, stream, workers)['concurrence_sq']
        return _shift(estimate, curves.input_concurrence(theta) ** 2)

    def report(self, ch: KrausChannel, theta: float, n: int, stream: SampleStream,
               workers: int = 1) -> OrbitVariationReport:
        self._require_two_qubit(ch)
        orbit = SchmidtOrbit.from_theta(theta)
        contractions = orbit_contractions(ch, orbit.purity)
        lower, upper = self.delta_eC_bounds(ch, theta)
        estimates = self._orbit_estimates(
            ch, theta, ('concurrence', 'negativity', 'linear_entropy', 'concurrence_sq'), n, stream, workers
        )
        return OrbitVariationReport(
            theta=float(theta),
            mu=orbit.purity,
            delta_eC=_shift(estimates['concurrence'], curves.input_concurrence(theta)),
            delta_eN=_shift(estimates['negativity'], curves.input_negativity(theta)),
            delta_eL=_shift(estimates['linear_entropy'], curves.input_linear_entropy(theta)),
            delta_eC2=_shift(estimates['concurrence_sq'], curves.input_concurrence(theta) ** 2),
            deltaP_orbit=contractions.delta_P.max,
            delta_eL_analytic=contractions.linear_entropy - (1.0 - orbit.purity),
            lower=lower,
            upper=upper,
            eN_upper=self.delta_eN_upper(ch, theta),
            global_impurity=contractions.global_impurity,
        )
