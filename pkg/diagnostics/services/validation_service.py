"""
Servicio de validación: ejecuta la batería de comprobaciones numéricas
(identidades de álgebra lineal, momentos de Haar, canales, fidelidades,
potencias de entrelazamiento, operadores de dos copias y propiedades) y
devuelve un informe legible por máquina.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from biqkit import __version__
from core.exceptions import ChannelValidationError
from core.linalg import (
    dagger,
    hermitian_eig,
    partial_trace,
    partial_transpose_B,
    purity,
    swap_operator,
)
from core.sampling import (
    HaarStateSampler,
    OrbitStateSampler,
    ProductStateSampler,
    SampleStream,
    SchmidtOrbit,
    mc_mean,
    sample_haar_states,
    sample_haar_unitaries,
)
from diagnostics.config import CHANNEL_CONFIG, MC_CONFIG, SYSTEM_MESSAGES
from diagnostics.providers.channels import (
    CZ,
    ChannelManager,
    KrausChannel,
    channels_equal,
    compose,
    correlated_dephasing,
    cz_correlated_dephasing,
    error_channel,
    global_depolarizing,
    identity_channel,
    local_depolarizing,
    local_phase_flip,
    local_unitary_channel,
    mix,
    phase_damping,
    product_channel,
    random_local_kraus,
    random_stinespring_channel,
    unitary_channel,
)
from diagnostics.providers.channels.channel_zoo import X
from diagnostics.tools import reference_curves as curves
from diagnostics.tools.measures import concurrence_pure, delta_P, linear_entropy, negativity, tangle
from diagnostics.tools.two_copy import omega_mu, omega_product
from .entangling_power_service import EntanglingPowerService
from .fidelity_service import FidelityService
from .orbit_variation_service import OrbitVariationService


def _finite(value: Optional[float]) -> Optional[float]:
    # JSON no admite inf ni nan
    return value if value is None or math.isfinite(value) else None


@dataclass(frozen=True)
class CheckResult:
    name: str
    group: str
    passed: bool
    value: Optional[float] = None
    expected: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ''

    def as_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'group': self.group,
            'passed': self.passed,
            'value': _finite(self.value),
            'expected': _finite(self.expected),
            'tolerance': _finite(self.tolerance),
            'detail': self.detail,
        }


@dataclass
class ValidationReport:
    checks: List[CheckResult] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        # Un informe vacío no valida nada
        return bool(self.checks) and all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def as_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'total': len(self.checks),
            'failed': len(self.failures),
            'checks': [check.as_dict() for check in self.checks],
            'metadata': self.metadata,
        }


@dataclass(frozen=True)
class TwoCopyMomentIntegrand:
    """Componentes de |ψ⟩⟨ψ| ⊗ |ψ⟩⟨ψ| en el orden A, B, A', B'."""

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        rho = psi[:, :, None] * np.conj(psi)[:, None, :]
        n, D = psi.shape
        return np.einsum('nij,nkl->nikjl', rho, rho).reshape(n, D ** 4)


@dataclass(frozen=True)
class _UnitaryEntryMoment:
    """|U_00|^power para unitarias aplanadas."""
    power: int

    def __call__(self, flat: np.ndarray) -> np.ndarray:
        return np.abs(flat[:, 0]) ** self.power


@dataclass(frozen=True)
class _FlatUnitarySampler:
    d: int

    def __call__(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return sample_haar_unitaries(self.d, count, rng).reshape(count, self.d * self.d)


@dataclass(frozen=True)
class _DensityIntegrand:
    def __call__(self, psi: np.ndarray) -> np.ndarray:
        return (psi[:, :, None] * np.conj(psi)[:, None, :]).reshape(psi.shape[0], -1)


@dataclass(frozen=True)
class _QubitPairMoment:
    """|a|²|b|² de un qubit de Haar."""

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        return np.abs(psi[:, 0]) ** 2 * np.abs(psi[:, 1]) ** 2


@dataclass(frozen=True)
class _AbsoluteProductMoment:
    """|a||b||c||d| de un estado producto de dos qubits."""

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        return np.prod(np.abs(psi), axis=1)


class _StreamPool:
    """Entrega corrientes hijas sucesivas de una raíz."""

    def __init__(self, root: SampleStream):
        self.root = root
        self.index = 0

    def next(self) -> SampleStream:
        stream = self.root.child(self.index)
        self.index += 1
        return stream


class ValidationService:

    GROUPS = ('linalg', 'sampling', 'channels', 'fidelity', 'entangling_power', 'two_copy',
              'orbit_variation', 'properties')

    def __init__(self, seed: int, samples: int, quick: bool = False, workers: int = 1):
        self.logger = logging.getLogger(__name__)
        self.seed = seed
        self.quick = quick
        self.samples = min(samples, MC_CONFIG['quick_samples']) if quick else samples
        self.grid_samples = min(self.samples, MC_CONFIG['quick_samples'])
        self.workers = workers
        self.sigmas = MC_CONFIG['sigmas']
        self.corpus = 20 if quick else 100
        self.root = SampleStream(seed=seed)
        self.fidelity = FidelityService()
        self.entangling_power = EntanglingPowerService()
        self.orbit_variation = OrbitVariationService()
        self.manager = ChannelManager.get_instance()

    # ------------------------------------------------------------------
    # Utilidades
    # ------------------------------------------------------------------

    def _close(self, name: str, group: str, value: float, expected: float, tolerance: float) -> CheckResult:
        value, expected = float(value), float(expected)
        return CheckResult(name=name, group=group, passed=abs(value - expected) <= tolerance,
                           value=value, expected=expected, tolerance=tolerance)

    def _mc(self, name: str, group: str, estimate, expected: float, sigmas: float = None) -> CheckResult:
        sigmas = self.sigmas if sigmas is None else sigmas
        tolerance = sigmas * float(estimate.stderr) + 1e-12
        return CheckResult(name=name, group=group,
                           passed=abs(float(estimate.mean) - float(expected)) <= tolerance,
                           value=float(estimate.mean), expected=float(expected), tolerance=tolerance,
                           detail=f"n={estimate.n}, stderr={float(estimate.stderr)!r}")

    def _below(self, name: str, group: str, value: float, limit: float, tolerance: float) -> CheckResult:
        value, limit = float(value), float(limit)
        return CheckResult(name=name, group=group, passed=value <= limit + tolerance,
                           value=value, expected=limit, tolerance=tolerance)

    def _family_grid(self, name: str, points: int = 21) -> List[float]:
        start, stop, _ = self.manager.require_provider(name).default_grid
        return [float(x) for x in np.linspace(start, stop, points)]

    def _family_mid(self, name: str) -> float:
        start, stop, _ = self.manager.require_provider(name).default_grid
        return 0.5 * (start + stop)

    def separable_families(self) -> List[str]:
        """Familias registradas cuyas salidas sobre entradas producto son separables."""
        return [name for name, provider in self.manager.providers.items() if provider.separable]

    def _random_hermitian(self, dim: int, count: int, stream: SampleStream) -> np.ndarray:
        rng = stream.generator()
        g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
        return g + dagger(g)

    def _random_density(self, dim: int, count: int, stream: SampleStream) -> np.ndarray:
        rng = stream.generator()
        g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
        rho = g @ dagger(g)
        return rho / np.trace(rho, axis1=-2, axis2=-1).real[:, None, None]

    # ------------------------------------------------------------------
    # Grupos de comprobaciones
    # ------------------------------------------------------------------

    def check_linalg(self, streams: _StreamPool) -> List[CheckResult]:
        group = 'linalg'
        results = []
        for dim in (4, 16):
            h = self._random_hermitian(dim, self.corpus, streams.next())
            decomposition = hermitian_eig(h)
            trace_error = np.max(np.abs(decomposition.eigenvalues.sum(axis=-1) - np.trace(h, axis1=-2, axis2=-1).real))
            scale = np.maximum(1.0, np.linalg.norm(h, axis=(-2, -1)))
            reconstruction = np.max(np.linalg.norm(decomposition.reconstruct() - h, axis=(-2, -1)) / scale)
            results.append(self._below(f"eig_trace_d{dim}", group, trace_error, 0.0, 1e-10 * dim))
            results.append(self._below(f"eig_reconstruction_d{dim}", group, reconstruction, 0.0, 1e-10))

        rho = self._random_density(4, self.corpus, streams.next())
        two_copy = np.einsum('nij,nkl->nikjl', rho, rho).reshape(-1, 16, 16)
        s_a = swap_operator(2, "AA'")
        s_b = swap_operator(2, "BB'")
        both = swap_operator(2, 'both')
        results.append(self._below('swap_involution', group,
                                   np.max(np.abs(s_a @ s_a - np.eye(16))), 0.0, 1e-12))
        swap_global = np.einsum('nij,ji->n', two_copy, both).real
        swap_local = np.einsum('nij,ji->n', two_copy, s_a).real
        results.append(self._below('swap_trick_global', group,
                                   np.max(np.abs(swap_global - purity(rho))), 0.0, 1e-10))
        results.append(self._below('swap_trick_reduced', group,
                                   np.max(np.abs(swap_local - purity(partial_trace(rho, 2, 2, 'A')))), 0.0, 1e-10))
        results.append(CheckResult(name='swap_pair_product', group=group,
                                   passed=bool(np.allclose(s_a @ s_b, both, atol=1e-12))))
        results.append(CheckResult(
            name='partial_transpose_involution', group=group,
            passed=bool(np.array_equal(partial_transpose_B(partial_transpose_B(rho, 2, 2), 2, 2), rho)),
        ))
        kept = np.trace(partial_trace(rho, 2, 2, 'B'), axis1=-2, axis2=-1).real
        results.append(self._below('partial_trace_preserves_trace', group, np.max(np.abs(kept - 1.0)), 0.0, 1e-12))
        return results

    def check_sampling(self, streams: _StreamPool) -> List[CheckResult]:
        group = 'sampling'
        n = self.samples
        results = [
            self._mc('haar_unitary_second_moment', group,
                     mc_mean(_UnitaryEntryMoment(2), _FlatUnitarySampler(2), n, streams.next()), 0.5),
            self._mc('haar_unitary_fourth_moment', group,
                     mc_mean(_UnitaryEntryMoment(4), _FlatUnitarySampler(2), n, streams.next()), 1.0 / 3.0),
            self._mc('haar_qubit_pair_moment', group,
                     mc_mean(_QubitPairMoment(), HaarStateSampler(2), n, streams.next()), 1.0 / 6.0),
            self._mc('product_absolute_moment', group,
                     mc_mean(_AbsoluteProductMoment(), ProductStateSampler(2, 2), n, streams.next()),
                     (math.pi / 8.0) ** 2),
        ]
        estimate = mc_mean(_DensityIntegrand(), HaarStateSampler(4), n, streams.next())
        results.append(CheckResult(name='haar_state_first_moment', group=group,
                                   passed=estimate.agrees_with(np.eye(4).reshape(-1) / 4.0, 5.0)))

        stream = streams.next()
        first = mc_mean(_QubitPairMoment(), HaarStateSampler(2), n, stream)
        second = mc_mean(_QubitPairMoment(), HaarStateSampler(2), n, stream)
        results.append(CheckResult(name='stream_reproducibility', group=group,
                                   passed=first.mean == second.mean and first.stderr == second.stderr,
                                   value=first.mean, expected=second.mean))
        if self.workers > 1:
            parallel = mc_mean(_QubitPairMoment(), HaarStateSampler(2), n, stream, workers=self.workers)
            results.append(self._close('parallel_matches_serial', group, parallel.mean, first.mean, 1e-12))
        return results

    def check_channels(self, streams: _StreamPool) -> List[CheckResult]:
        group = 'channels'
        results = []
        for name in self.manager.get_available_providers():
            residuals = [self.manager.build(name, value).completeness_residual()
                         for value in self._family_grid(name)]
            results.append(self._below(f"cptp_grid_{name}", group, max(residuals), 0.0,
                                       CHANNEL_CONFIG['completeness_tolerance']))

        equal = all(
            channels_equal(phase_damping(1.0, t), correlated_dephasing((1.0 - math.exp(-t * t / 2.0)) / 2.0))
            for t in np.linspace(0.0, 3.0, 7)
        )
        results.append(CheckResult(name='phase_damping_is_correlated_dephasing', group=group, passed=equal))
        equal = all(
            channels_equal(error_channel(cz_correlated_dephasing(u), CZ), correlated_dephasing((1.0 - u) / 2.0))
            for u in np.linspace(-1.0, 1.0, 5)
        )
        results.append(CheckResult(name='noisy_cz_error_channel', group=group, passed=equal))
        depolarized = global_depolarizing(1.0).apply(self._random_density(4, 1, streams.next())[0])
        results.append(self._below('global_depolarizing_full', group,
                                   np.max(np.abs(depolarized - np.eye(4) / 4.0)), 0.0, 1e-12))

        worst = 0.0
        for _ in range(10 if self.quick else 50):
            a = random_local_kraus(2, streams.next())
            b = random_local_kraus(2, streams.next())
            ch = product_channel(a, b)
            x_a = float(np.sum(np.abs(np.trace(a, axis1=-2, axis2=-1)) ** 2))
            x_b = float(np.sum(np.abs(np.trace(b, axis1=-2, axis2=-1)) ** 2))
            worst = max(worst, abs(ch.T - x_a * x_b), abs(ch.M_A - 2.0 * x_b), abs(ch.M_B - 2.0 * x_a))
        results.append(self._below('product_channel_invariants', group, worst, 0.0, 1e-10))
        return results

    def check_fidelity(self, streams: _StreamPool) -> List[CheckResult]:
        group = 'fidelity'
        results = []
        for name in self.manager.get_available_providers():
            provider = self.manager.require_provider(name)
            worst = 0.0
            for value in self._family_grid(name, 11):
                ch = self.manager.build(name, value)
                reference = provider.reference_values(value)
                computed = {'f_avg': self.fidelity.favg_analytic(ch), 'f_prod': self.fidelity.fprod_analytic(ch),
                            'chi_F': self.fidelity.chi_F(ch)}
                for key, expected in computed.items():
                    if key in reference:
                        worst = max(worst, abs(expected - reference[key]))
                if 'e_L' in reference:
                    worst = max(worst, abs(self.entangling_power.e_L_analytic(ch) - reference['e_L']))
            results.append(self._below(f"closed_forms_{name}", group, worst, 0.0, 1e-10))

            value = self._family_mid(name)
            ch = self.manager.build(name, value)
            results.append(self._mc(f"f_avg_mc_{name}", group, self.fidelity.favg_mc(ch, self.samples, streams.next()),
                                    self.fidelity.favg_analytic(ch)))
            results.append(self._mc(f"f_prod_mc_{name}", group, self.fidelity.fprod_mc(ch, self.samples, streams.next()),
                                    self.fidelity.fprod_analytic(ch)))

        xx = unitary_channel(np.kron(X, X), label='XX')
        results.append(self._close('chi_F_xx', group, self.fidelity.chi_F(xx), 4.0 / 45.0, 1e-12))
        worst = max(abs(self.fidelity.chi_F(local_phase_flip(g)) - 4.0 * g * (4.0 * g - 3.0) / 45.0)
                    for g in np.linspace(0.0, 1.0, 11))
        results.append(self._below('chi_F_local_phase_flip', group, worst, 0.0, 1e-12))

        accepted, violations = 0, 0
        for _ in range(500):
            if accepted >= 50:
                break
            stream = streams.next()
            rng = stream.generator()
            q_a, q_b = rng.uniform(0.0, 1.0, size=2)
            a = np.concatenate([[math.sqrt(q_a) * np.eye(2)], math.sqrt(1.0 - q_a) * random_local_kraus(2, stream.child(0))])
            b = np.concatenate([[math.sqrt(q_b) * np.eye(2)], math.sqrt(1.0 - q_b) * random_local_kraus(2, stream.child(1))])
            if self.fidelity.local_favg(a) < 0.5 or self.fidelity.local_favg(b) < 0.5:
                continue
            accepted += 1
            if self.fidelity.chi_F(product_channel(a, b)) > 1e-12:
                violations += 1
        results.append(CheckResult(name='chi_F_sign_product_channels', group=group,
                                   passed=violations == 0 and accepted > 0,
                                   value=float(violations), detail=f"{accepted} pares aceptados"))

        instances = 5 if self.quick else 20
        for index in range(instances):
            ch = random_stinespring_channel(2, 2, streams.next())
            for theta in (0.0, math.pi / 8, math.pi / 4):
                expected = (self.fidelity.fprod_analytic(ch)
                            + 2.5 * math.sin(2.0 * theta) ** 2 * self.fidelity.chi_F(ch))
                estimate = self.fidelity.forbit_mc(ch, SchmidtOrbit.from_theta(theta), self.samples, streams.next())
                results.append(self._mc(f"orbit_law_random{index}_theta{theta:.4f}", group, estimate, expected))
                results.append(self._close(f"orbit_raw_random{index}_theta{theta:.4f}", group,
                                           self.fidelity.forbit_raw(ch, curves.orbit_purity(theta)),
                                           self.fidelity.forbit_theta(ch, theta), 1e-12))

        spectra = {
            3: ((1.0, 0.0, 0.0), (0.5, 0.3, 0.2), (1 / 3, 1 / 3, 1 / 3)),
            4: ((1.0, 0.0, 0.0, 0.0), (0.4, 0.3, 0.2, 0.1), (0.25, 0.25, 0.25, 0.25)),
        }
        for d, lambdas in spectra.items():
            ch = random_stinespring_channel(d, d, streams.next())
            for lam in lambdas:
                orbit = SchmidtOrbit(lam)
                estimate = self.fidelity.forbit_mc(ch, orbit, self.samples, streams.next())
                results.append(self._mc(f"orbit_law_d{d}_mu{orbit.purity:.4f}", group, estimate,
                                        self.fidelity.forbit_analytic(ch, orbit.purity)))
        return results

    def check_entangling_power(self, streams: _StreamPool) -> List[CheckResult]:
        group = 'entangling_power'
        n = self.samples
        results = []
        for phi in np.linspace(0.0, 2.0 * math.pi, 9):
            ch = self.manager.build('controlled-phase', phi)
            estimates = self.entangling_power.output_estimates(
                ch, ('concurrence', 'negativity', 'linear_entropy'), n, streams.next())
            results.append(self._mc(f"cp_e_C_{phi:.4f}", group, estimates['concurrence'], curves.controlled_phase_e_C(phi)))
            results.append(self._mc(f"cp_e_N_{phi:.4f}", group, estimates['negativity'], curves.controlled_phase_e_N(phi)))
            results.append(self._mc(f"cp_e_L_{phi:.4f}", group, estimates['linear_entropy'],
                                    curves.controlled_phase_e_L(phi)))
        for u in np.linspace(0.0, 1.0, 6):
            ch = cz_correlated_dephasing(u)
            estimates = self.entangling_power.output_estimates(ch, ('concurrence', 'linear_entropy'), n, streams.next())
            results.append(self._mc(f"noisy_cz_e_C_{u:.2f}", group, estimates['concurrence'], curves.noisy_cz_e_C(u)))
            results.append(self._mc(f"noisy_cz_e_L_{u:.2f}", group, estimates['linear_entropy'], curves.noisy_cz_e_L(u)))

        separable_limit = MC_CONFIG['separable_tolerance']
        for name in self.separable_families():
            value = self._family_mid(name)
            ch = self.manager.build(name, value)
            stream = streams.next()
            c = self.entangling_power.output_samples(ch, 'concurrence', n, stream)
            neg = self.entangling_power.output_samples(ch, 'negativity', n, stream)
            results.append(self._below(f"separable_concurrence_{name}", group, np.max(c), 0.0, separable_limit))
            results.append(self._below(f"separable_negativity_{name}", group, np.max(neg), 0.0, separable_limit))
            reference = self.manager.require_provider(name).reference_values(value)
            results.append(self._mc(f"separable_e_L_{name}", group,
                                    self.entangling_power.e_L_mc(ch, n, stream), reference['e_L']))

        channels = [(name, self.manager.build(name, self._family_mid(name)))
                    for name in self.manager.get_available_providers()]
        channels += [(f"mixed-unitary-{p}", self.manager.build('mixed-unitary', p)) for p in (0.25, 0.75)]
        for label, ch in channels:
            report = self.entangling_power.report(ch, n, streams.next())
            for key, ok in report.consistency(self.sigmas).items():
                results.append(CheckResult(name=f"bounds_{key}_{label}", group=group, passed=bool(ok),
                                           value=report.e_C.mean, detail=f"[{report.lower!r}, {report.upper!r}]"))

        lowers = [self.entangling_power.e_C_bounds(self.manager.build('phase-damping', t))[0]
                  for t in self._family_grid('phase-damping', 41)]
        results.append(self._below('phase_damping_lower_bound_zero', group, max(lowers), 0.0, 1e-12))

        g = self.manager.require_provider('cz-phase-damping').default_options['g']
        times = self._family_grid('cz-phase-damping', 41)
        stream = streams.next()
        means = [self.entangling_power.e_C_mc(self.manager.build('cz-phase-damping', t), self.grid_samples,
                                              stream.child(i)).mean
                 for i, t in enumerate(times)]
        argmax = times[int(np.argmax(means))]
        results.append(CheckResult(name='cz_phase_damping_peak_shift', group=group,
                                   passed=argmax < math.pi / (2.0 * g), value=argmax, expected=math.pi / (2.0 * g)))
        return results

    def check_two_copy(self, streams: _StreamPool) -> List[CheckResult]:
        group = 'two_copy'
        results = []
        for d in (2, 3, 4):
            results.append(self._below(f"omega_pure_limit_d{d}", group,
                                       np.max(np.abs(omega_mu(d, 1.0) - omega_product(d))), 0.0, 1e-12))
        estimate = mc_mean(TwoCopyMomentIntegrand(), ProductStateSampler(2, 2), self.samples, streams.next())
        results.append(CheckResult(name='omega_product_mc', group=group,
                                   passed=estimate.agrees_with(omega_product(2).reshape(-1), 5.0),
                                   value=float(np.max(estimate.deviation(omega_product(2).reshape(-1))))))
        for theta in (0.0, math.pi / 8, math.pi / 4):
            orbit = SchmidtOrbit.from_theta(theta)
            expected = omega_mu(2, orbit.purity).reshape(-1)
            estimate = mc_mean(TwoCopyMomentIntegrand(), OrbitStateSampler(orbit), self.samples, streams.next())
            results.append(CheckResult(name=f"omega_orbit_mc_mu{orbit.purity:.4f}", group=group,
                                       passed=estimate.agrees_with(expected, 5.0),
                                       value=float(np.max(estimate.deviation(expected)))))

        psi = sample_haar_states(4, self.corpus, streams.next().generator())
        rho = psi[:, :, None] * np.conj(psi)[:, None, :]
        c = concurrence_pure(psi)
        results.append(self._below('pure_negativity_half_concurrence', group,
                                   np.max(np.abs(2.0 * negativity(rho) - c)), 0.0, 1e-9))
        results.append(self._below('pure_tangle_linear_entropy', group,
                                   np.max(np.abs(c ** 2 - 2.0 * linear_entropy(rho))), 0.0, 1e-9))
        return results

    def check_orbit_variation(self, streams: _StreamPool) -> List[CheckResult]:
        group = 'orbit_variation'
        results = []
        spots = (('phase-damping', 1.0), ('cz-phase-damping', 0.75), ('cz-correlated-dephasing', 0.5))
        for name, value in spots:
            ch = self.manager.build(name, value)
            for theta in (0.0, math.pi / 8, math.pi / 4):
                estimate = self.orbit_variation.delta_eL_mc(ch, theta, self.samples, streams.next())
                expected = self.orbit_variation.delta_eL_analytic(ch, curves.orbit_purity(theta))
                results.append(self._mc(f"delta_eL_{name}_theta{theta:.4f}", group, estimate, expected))

        points = (5, 3) if self.quick else (9, 5)
        for name in ('phase-damping', 'cz-phase-damping'):
            outside = []
            stream = streams.next()
            index = 0
            for t in self._family_grid(name, points[0]):
                ch = self.manager.build(name, t)
                for theta in np.linspace(0.0, math.pi / 4, points[1]):
                    estimate = self.orbit_variation.delta_eC_mc(ch, theta, self.grid_samples, stream.child(index))
                    lower, upper = self.orbit_variation.delta_eC_bounds(ch, theta)
                    slack = self.sigmas * estimate.stderr + 1e-12
                    if not lower - slack <= estimate.mean <= upper + slack:
                        outside.append((t, float(theta)))
                    index += 1
            results.append(CheckResult(name=f"delta_eC_sandwich_{name}", group=group, passed=not outside,
                                       value=float(len(outside)), detail=str(outside[:5])))
        return results

    def check_properties(self, streams: _StreamPool) -> List[CheckResult]:
        group = 'properties'
        n = self.grid_samples
        tolerance = 1e-8
        results = []
        cz = self.manager.build('controlled-phase', math.pi)
        noisy = random_stinespring_channel(2, 2, streams.next())

        u = [sample_haar_unitaries(2, 1, streams.next().generator())[0] for _ in range(4)]
        rotated = compose(local_unitary_channel(u[0], u[1]), compose(noisy, local_unitary_channel(u[2], u[3])))
        results.append(self._close('lu_invariance_e_L', group, self.entangling_power.e_L_analytic(rotated),
                                   self.entangling_power.e_L_analytic(noisy), 1e-10))
        stream = streams.next()
        after = compose(local_unitary_channel(u[0], u[1]), noisy)
        pointwise = np.max(np.abs(self.entangling_power.output_samples(after, 'concurrence', n, stream)
                                  - self.entangling_power.output_samples(noisy, 'concurrence', n, stream)))
        results.append(self._below('lu_invariance_pointwise', group, pointwise, 0.0, tolerance))
        a = self.entangling_power.e_C_mc(rotated, self.samples, streams.next())
        b = self.entangling_power.e_C_mc(noisy, self.samples, streams.next())
        results.append(self._close('lu_invariance_e_C', group, a.mean, b.mean,
                                   self.sigmas * math.hypot(a.stderr, b.stderr) + 1e-12))

        p = 0.35
        mixed = mix(p, cz, noisy)
        stream = streams.next()
        for measure, sign in (('concurrence', 1.0), ('negativity', 1.0), ('linear_entropy', -1.0)):
            values = {key: self.entangling_power.output_samples(ch, measure, n, stream)
                      for key, ch in (('mix', mixed), ('a', cz), ('b', noisy))}
            gap = sign * (values['mix'] - (p * values['a'] + (1.0 - p) * values['b']))
            label = 'convexity' if sign > 0 else 'concavity'
            results.append(self._below(f"{label}_{measure}", group, np.max(gap), 0.0, tolerance))

        local = product_channel(random_local_kraus(2, streams.next()), random_local_kraus(2, streams.next()))
        processed = compose(local, cz)
        stream = streams.next()
        for measure in ('concurrence', 'negativity'):
            gap = (self.entangling_power.output_samples(processed, measure, n, stream)
                   - self.entangling_power.output_samples(cz, measure, n, stream))
            results.append(self._below(f"local_postprocessing_{measure}", group, np.max(gap), 0.0, tolerance))

        noise = local_depolarizing(0.3)
        for name in self.manager.get_available_providers():
            ch = self.manager.build(name, self._family_mid(name))
            stream = streams.next()
            for measure in ('concurrence', 'negativity'):
                gap = (self.entangling_power.output_samples(compose(noise, ch), measure, n, stream)
                       - self.entangling_power.output_samples(ch, measure, n, stream))
                results.append(self._below(f"local_depolarizing_{measure}_{name}", group,
                                           np.max(gap), 0.0, tolerance))

        # e_L sí crece bajo posprocesado local: identidad frente a inversión de fase local
        before = self.entangling_power.e_L_analytic(identity_channel())
        after = self.entangling_power.e_L_analytic(local_phase_flip(0.5))
        results.append(CheckResult(name='e_L_local_postprocessing_counterexample', group=group,
                                   passed=abs(before) <= 1e-12 and after > 1e-3, value=after, expected=before,
                                   detail='e_L(identidad) = 0 < e_L(inversión de fase local, γ=0.5)'))

        stream = streams.next()
        count = 200 if self.quick else 1000
        for index, k in enumerate((1, 2, 4)):
            psi = sample_haar_states(4 * k, count, stream.child(index).generator()).reshape(count, 4, k)
            rho = psi @ dagger(psi)
            tau = tangle(rho)
            lower = 2.0 * np.maximum(delta_P(rho, traced='A'), delta_P(rho, traced='B'))
            results.append(self._below(f"tangle_lower_bound_rank{k}", group, np.max(lower - tau), 0.0, 1e-9))
            results.append(self._below(f"tangle_upper_bound_rank{k}", group,
                                       np.max(tau - 2.0 * linear_entropy(rho)), 0.0, 1e-9))
        psi = sample_haar_states(4, 100, streams.next().generator())
        rho = psi[:, :, None] * np.conj(psi)[:, None, :]
        results.append(self._below('pure_tangle_mixed_path', group,
                                   np.max(np.abs(tangle(rho) - 2.0 * linear_entropy(rho))), 0.0, 1e-9))
        return results

    def check_channel(self, ch: KrausChannel, streams: _StreamPool) -> List[CheckResult]:
        """Comprobaciones de un canal concreto (leído de JSON)."""
        group = 'channel'
        report = ch.validate()
        results = [CheckResult(name='completeness', group=group, passed=report.passed, value=report.residual,
                               expected=0.0, tolerance=report.tolerance,
                               detail=f"residuo de completitud {report.residual!r}")]
        if not report.passed:
            return results
        results.append(self._mc('f_avg_mc', group, self.fidelity.favg_mc(ch, self.samples, streams.next()),
                                self.fidelity.favg_analytic(ch)))
        results.append(self._mc('f_prod_mc', group, self.fidelity.fprod_mc(ch, self.samples, streams.next()),
                                self.fidelity.fprod_analytic(ch)))
        if (ch.dA, ch.dB) == (2, 2):
            power = self.entangling_power.report(ch, self.samples, streams.next())
            for key, ok in power.consistency(self.sigmas).items():
                results.append(CheckResult(name=f"bounds_{key}", group=group, passed=bool(ok), value=power.e_C.mean))
            results.append(self._mc('e_L_mc', group, power.e_L, power.e_L_analytic))
        return results

    # ------------------------------------------------------------------
    # Ejecución
    # ------------------------------------------------------------------

    def _groups(self) -> List[Callable[[_StreamPool], List[CheckResult]]]:
        return [
            self.check_linalg,
            self.check_sampling,
            self.check_channels,
            self.check_fidelity,
            self.check_entangling_power,
            self.check_two_copy,
            self.check_orbit_variation,
            self.check_properties,
        ]

    def _metadata(self, **extra) -> Dict[str, Any]:
        metadata = {
            'command': 'validate',
            'tool_version': __version__,
            'seed': self.seed,
            'samples': self.samples,
            'quick': self.quick,
        }
        metadata.update(extra)
        return metadata

    def _log(self, report: ValidationReport) -> ValidationReport:
        for check in report.failures:
            self.logger.warning(f"Comprobación fallida {check.group}/{check.name}: "
                                f"valor={check.value}, esperado={check.expected}, tol={check.tolerance}")
        if report.passed:
            self.logger.info(f"{SYSTEM_MESSAGES['validation_pass']} ({len(report.checks)})")
        else:
            self.logger.warning(f"{SYSTEM_MESSAGES['validation_fail']}: {len(report.failures)}/{len(report.checks)}")
        return report

    def run(self, groups: List[str] = None) -> ValidationReport:
        """
        Ejecuta la batería completa (o los grupos indicados).

        Args:
            groups: Nombres de grupo ('linalg', 'sampling', ...); None ejecuta todos

        Returns:
            ValidationReport: Informe con una entrada por comprobación

        Raises:
            ValueError: Si algún grupo no existe
        """
        unknown = sorted(set(groups or ()) - set(self.GROUPS))
        if unknown:
            raise ValueError(f"Grupos desconocidos {unknown}. Disponibles: {list(self.GROUPS)}")
        report = ValidationReport(metadata=self._metadata())
        for index, check in enumerate(self._groups()):
            name = check.__name__.replace('check_', '')
            if groups and name not in groups:
                continue
            self.logger.info(f"Ejecutando comprobaciones de {name}")
            report.checks.extend(check(_StreamPool(self.root.child(index))))
        return self._log(report)

    def run_channel(self, ch: KrausChannel, source: str = '') -> ValidationReport:
        """
        Valida un canal concreto.

        Raises:
            ChannelValidationError: Si el canal no es CPTP (el informe va en `report`)
        """
        report = ValidationReport(checks=self.check_channel(ch, _StreamPool(self.root)),
                                  metadata=self._metadata(channel=source or ch.label))
        self._log(report)
        first = report.checks[0]
        if not first.passed:
            error = ChannelValidationError(f"{SYSTEM_MESSAGES['not_cptp']}: residuo {first.value!r}", first.value)
            error.report = report
            raise error
        return report
