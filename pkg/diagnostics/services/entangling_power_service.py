"""
Servicio de potencias de entrelazamiento sobre entradas producto de Haar
y cotas analíticas de dos copias.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from core.exceptions import DimensionError, ParameterDomainError
from core.sampling import (
    MonteCarloEstimate,
    ProductStateSampler,
    SampleStream,
    mc_mean,
    mc_samples,
)
from diagnostics.providers.channels import KrausChannel
from diagnostics.tools.measures import concurrence, delta_P, global_impurity, linear_entropy, negativity
from diagnostics.tools.two_copy import TracedPair, product_contractions

CONCURRENCE_MEASURES = ('concurrence', 'concurrence_sq')
OUTPUT_MEASURES = (
    'concurrence',
    'concurrence_sq',
    'negativity',
    'linear_entropy',
    'delta_P_A',
    'delta_P_B',
    'global_impurity',
)


@dataclass(frozen=True)
class OutputMeasureIntegrand:
    """Medidas de Φ(|ψ⟩⟨ψ|) por muestra; columnas en el orden de `measures`."""
    channel: KrausChannel
    measures: Tuple[str, ...]

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        rho = self.channel.apply_to_kets(psi)
        dA, dB = self.channel.dA, self.channel.dB
        columns = []
        c = None
        for name in self.measures:
            if name in CONCURRENCE_MEASURES:
                if c is None:
                    c = np.asarray(concurrence(rho, check=False))
                columns.append(c if name == 'concurrence' else c * c)
            elif name == 'negativity':
                columns.append(negativity(rho, dA, dB, check=False))
            elif name == 'linear_entropy':
                columns.append(linear_entropy(rho, dA, dB, check=False))
            elif name == 'delta_P_A':
                columns.append(delta_P(rho, dA, dB, traced='A', check=False))
            elif name == 'delta_P_B':
                columns.append(delta_P(rho, dA, dB, traced='B', check=False))
            else:
                columns.append(global_impurity(rho, check=False))
        return np.stack([np.asarray(col, dtype=float).reshape(-1) for col in columns], axis=1)


@dataclass(frozen=True)
class EntanglingPowerReport:
    """
    Potencias de entrelazamiento de un canal y sus cotas analíticas.

    Attributes:
        e_C, e_N, e_L, e_C2: Estimaciones MC sobre entradas producto
        delta_P: δ̄_P^⊗ analítico en sus dos variantes
        lower, upper: Cotas 2·max(0, δ̄_P) ≤ e_C ≤ √(2 e_L)
        e_N_upper: Cota superior de e_N
        e_L_analytic: e_L por contracción de dos copias
        global_impurity: 1 − Tr ρ² promedio analítico
    """
    e_C: MonteCarloEstimate
    e_N: MonteCarloEstimate
    e_L: MonteCarloEstimate
    e_C2: MonteCarloEstimate
    delta_P: TracedPair
    lower: float
    upper: float
    e_N_upper: float
    e_L_analytic: float
    global_impurity: float
    seed: int
    stream_id: int

    def consistency(self, sigmas: float = 3.0) -> Dict[str, bool]:
        """Cadenas de desigualdades que deben cumplirse con holgura de `sigmas`."""
        c, c2, en = self.e_C, self.e_C2, self.e_N
        combined = math.hypot(en.stderr, c.stderr / 2.0)
        return {
            'negativity_below_half_concurrence': en.mean <= c.mean / 2.0 + sigmas * combined + 1e-12,
            'tangle_chain_low': c.mean ** 2 <= c2.mean + sigmas * (2.0 * c.stderr + c2.stderr) + 1e-12,
            'tangle_chain_high': c2.mean <= c.mean + sigmas * (c.stderr + c2.stderr) + 1e-12,
            'lower_bound': self.lower <= c.mean + sigmas * c.stderr + 1e-12,
            'upper_bound': c.mean <= self.upper + sigmas * c.stderr + 1e-12,
            'negativity_upper_bound': en.mean <= self.e_N_upper + sigmas * en.stderr + 1e-12,
        }

    def as_dict(self) -> Dict[str, Any]:
        return {
            'e_C': self.e_C.as_dict(),
            'e_N': self.e_N.as_dict(),
            'e_L': self.e_L.as_dict(),
            'e_C2': self.e_C2.as_dict(),
            'delta_P_A': self.delta_P.traced_A,
            'delta_P_B': self.delta_P.traced_B,
            'lower': self.lower,
            'upper': self.upper,
            'e_N_upper': self.e_N_upper,
            'e_L_analytic': self.e_L_analytic,
            'global_impurity': self.global_impurity,
            'seed': self.seed,
            'stream_id': self.stream_id,
        }


class EntanglingPowerService:

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def _require_measures(self, ch: KrausChannel, measures: Sequence[str]) -> Tuple[str, ...]:
        measures = tuple(measures)
        unknown = [m for m in measures if m not in OUTPUT_MEASURES]
        if unknown:
            raise ValueError(f"Medidas desconocidas {unknown}. Medidas disponibles: {list(OUTPUT_MEASURES)}")
        if any(m in CONCURRENCE_MEASURES for m in measures) and (ch.dA, ch.dB) != (2, 2):
            raise DimensionError(f"La concurrencia solo está definida para dos qubits, canal {ch.dA}×{ch.dB}")
        return measures

    def _require_two_qubit(self, ch: KrausChannel) -> None:
        if (ch.dA, ch.dB) != (2, 2):
            raise DimensionError(f"Se requiere un canal de dos qubits, canal {ch.dA}×{ch.dB}")

    # ------------------------------------------------------------------
    # Monte Carlo
    # ------------------------------------------------------------------

    def output_estimates(self, ch: KrausChannel, measures: Sequence[str], n: int, stream: SampleStream,
                         workers: int = 1, sampler=None) -> Dict[str, MonteCarloEstimate]:
        """
        Promedios MC de varias medidas de la salida con las mismas entradas.

        Args:
            ch: Canal
            measures: Nombres de OUTPUT_MEASURES
            n: Número de muestras
            stream: Corriente de entradas
            workers: Procesos del pool
            sampler: Ensamble de entrada (por defecto, producto de Haar)

        Returns:
            Dict[str, MonteCarloEstimate]: una estimación por medida
        """
        measures = self._require_measures(ch, measures)
        sampler = sampler or ProductStateSampler(ch.dA, ch.dB)
        joint = mc_mean(OutputMeasureIntegrand(ch, measures), sampler, n, stream, workers)
        means = np.asarray(joint.mean).reshape(-1)
        errors = np.asarray(joint.stderr).reshape(-1)
        return {
            name: MonteCarloEstimate(mean=float(means[i]), stderr=float(errors[i]), n=joint.n,
                                     seed=joint.seed, stream_id=joint.stream_id)
            for i, name in enumerate(measures)
        }

    def output_samples(self, ch: KrausChannel, measure: str, n: int, stream: SampleStream,
                       sampler=None) -> np.ndarray:
        """Valores por muestra de una medida de la salida (para comprobaciones puntuales)."""
        measures = self._require_measures(ch, (measure,))
        sampler = sampler or ProductStateSampler(ch.dA, ch.dB)
        return mc_samples(OutputMeasureIntegrand(ch, measures), sampler, n, stream)[:, 0]

    def e_C_mc(self, ch: KrausChannel, n: int, stream: SampleStream, workers: int = 1) -> MonteCarloEstimate:
        return self.output_estimates(ch, ('concurrence',), n, stream, workers)['concurrence']

    def e_N_mc(self, ch: KrausChannel, n: int, stream: SampleStream, workers: int = 1) -> MonteCarloEstimate:
        return self.output_estimates(ch, ('negativity',), n, stream, workers)['negativity']

    def e_L_mc(self, ch: KrausChannel, n: int, stream: SampleStream, workers: int = 1) -> MonteCarloEstimate:
        return self.output_estimates(ch, ('linear_entropy',), n, stream, workers)['linear_entropy']

    def e_C2_mc(self, ch: KrausChannel, n: int, stream: SampleStream, workers: int = 1) -> MonteCarloEstimate:
        return self.output_estimates(ch, ('concurrence_sq',), n, stream, workers)['concurrence_sq']

    # ------------------------------------------------------------------
    # Analítico
    # ------------------------------------------------------------------

    def e_C_noisy_cz(self, u: float) -> float:
        """e_C(Φ_u^CZ) = u·π²/16."""
        if not 0.0 <= u <= 1.0:
            raise ParameterDomainError(f"u = {u} fuera de [0, 1]")
        return u * math.pi ** 2 / 16.0

    def delta_P_product_analytic(self, ch: KrausChannel) -> TracedPair:
        """δ̄_P^⊗ en sus dos variantes por contracción con Ω_⊗."""
        return product_contractions(ch).delta_P

    def e_L_analytic(self, ch: KrausChannel) -> float:
        return product_contractions(ch).linear_entropy

    def global_impurity_analytic(self, ch: KrausChannel) -> float:
        return product_contractions(ch).global_impurity

    def e_C_bounds(self, ch: KrausChannel) -> Tuple[float, float]:
        """2·max(0, δ̄_P^⊗) ≤ e_C ≤ √(2 e_L), con el máximo de las dos variantes de δ̄_P."""
        self._require_two_qubit(ch)
        contractions = product_contractions(ch)
        lower = 2.0 * max(0.0, contractions.delta_P.max)
        upper = math.sqrt(2.0 * max(0.0, contractions.linear_entropy))
        return lower, upper

    def e_N_upper(self, ch: KrausChannel) -> float:
        """e_N ≤ ½·√(2 e_L)."""
        return 0.5 * self.e_C_bounds(ch)[1]

    def report(self, ch: KrausChannel, n: int, stream: SampleStream, workers: int = 1) -> EntanglingPowerReport:
        self._require_two_qubit(ch)
        estimates = self.output_estimates(
            ch, ('concurrence', 'negativity', 'linear_entropy', 'concurrence_sq'), n, stream, workers
        )
        contractions = product_contractions(ch)
        lower, upper = self.e_C_bounds(ch)
        self.logger.debug(f"Potencias de {ch.label}: e_C={estimates['concurrence'].mean:.6f}")
        return EntanglingPowerReport(
            e_C=estimates['concurrence'],
            e_N=estimates['negativity'],
            e_L=estimates['linear_entropy'],
            e_C2=estimates['concurrence_sq'],
            delta_P=contractions.delta_P,
            lower=lower,
            upper=upper,
            e_N_upper=0.5 * upper,
            e_L_analytic=contractions.linear_entropy,
            global_impurity=contractions.global_impurity,
            seed=stream.seed,
            stream_id=stream.stream_id,
        )
