import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DimensionError, ParameterDomainError
from core.sampling import SampleStream, SchmidtOrbit
from core.tests.mixins import MonteCarloAssertionsMixin
from diagnostics.providers.channels import (
    CZ,
    controlled_phase,
    correlated_dephasing,
    cz_correlated_dephasing,
    global_depolarizing,
    identity_channel,
    local_amplitude_damping,
    local_depolarizing,
    local_phase_flip,
    product_channel,
    random_local_kraus,
    random_stinespring_channel,
    unitary_channel,
)
from diagnostics.providers.channels.channel_zoo import X
from diagnostics.services.fidelity_service import FidelityService
from diagnostics.tools import reference_curves as curves

N = 20_000


class ClosedFormFidelityTests(SimpleTestCase):

    def setUp(self):
        self.service = FidelityService()

    def test_identity(self):
        ch = identity_channel()
        self.assertAlmostEqual(self.service.favg_analytic(ch), 1.0)
        self.assertAlmostEqual(self.service.fprod_analytic(ch), 1.0)
        self.assertAlmostEqual(self.service.chi_F(ch), 0.0)

    def test_controlled_phase(self):
        for phi in np.linspace(0, 2 * math.pi, 9):
            ch = controlled_phase(phi)
            with self.subTest(phi=phi):
                self.assertAlmostEqual(self.service.favg_analytic(ch), (14 + 6 * math.cos(phi)) / 20, places=12)
                self.assertAlmostEqual(self.service.fprod_analytic(ch), (26 + 10 * math.cos(phi)) / 36, places=12)
                self.assertAlmostEqual(self.service.chi_F(ch), curves.controlled_phase_chi_F(phi), places=12)

    def test_depolarizing_and_dephasing(self):
        for p in (0.0, 0.3, 1.0):
            self.assertAlmostEqual(self.service.favg_analytic(global_depolarizing(p)),
                                   curves.global_depolarizing_f_avg(p), places=12)
        for gamma in (0.0, 0.25, 0.5, 1.0):
            ch = correlated_dephasing(gamma)
            with self.subTest(gamma=gamma):
                self.assertAlmostEqual(self.service.favg_analytic(ch), curves.correlated_dephasing_f_avg(gamma))
                self.assertAlmostEqual(self.service.fprod_analytic(ch), curves.correlated_dephasing_f_prod(gamma))
                self.assertAlmostEqual(self.service.chi_F(ch), curves.correlated_dephasing_chi_F(gamma))

    def test_local_noise_bias(self):
        cases = (
            (local_phase_flip, curves.local_phase_flip_chi_F),
            (local_amplitude_damping, curves.amplitude_damping_chi_F),
            (local_depolarizing, curves.local_depolarizing_chi_F),
        )
        for build, expected in cases:
            for value in (0.1, 0.5, 0.9):
                with self.subTest(family=build.__name__, value=value):
                    self.assertAlmostEqual(self.service.chi_F(build(value)), expected(value), places=12)

    def test_bit_flip_on_both_qubits(self):
        ch = unitary_channel(np.kron(X, X))
        self.assertAlmostEqual(self.service.chi_F(ch), 4 / 45, places=12)

    def test_product_bias_from_local_fidelities(self):
        root = SampleStream(seed=12)
        for index in range(10):
            a = random_local_kraus(2, root.child(2 * index))
            b = random_local_kraus(2, root.child(2 * index + 1))
            f_a, f_b = self.service.local_favg(a), self.service.local_favg(b)
            ch = product_channel(a, b)
            self.assertAlmostEqual(self.service.chi_F(ch), self.service.chi_F_product(f_a, f_b), places=12)
            self.assertAlmostEqual(self.service.fprod_analytic(ch), f_a * f_b, places=12)

    def test_product_bias_domain(self):
        with self.assertRaises(ParameterDomainError):
            self.service.chi_F_product(1.2, 0.5)

    def test_noisy_cz_relative_to_cz(self):
        for u in (0.0, 0.5, 1.0):
            profile = self.service.relative_profile(cz_correlated_dephasing(u), CZ, reference='cz')
            self.assertAlmostEqual(profile.f_avg, 0.6 + 0.4 * u, places=12)
            self.assertEqual(profile.reference, 'cz')


class OrbitFidelityTests(MonteCarloAssertionsMixin, SimpleTestCase):

    def setUp(self):
        self.service = FidelityService()
        self.channel = random_stinespring_channel(2, 2, SampleStream(seed=77))

    def test_raw_and_interpolated_forms_agree(self):
        root = SampleStream(seed=5)
        for index in range(5):
            ch = random_stinespring_channel(2, 2, root.child(index))
            for mu in (0.5, 0.75, 1.0):
                self.assertAlmostEqual(self.service.forbit_raw(ch, mu), self.service.forbit_analytic(ch, mu),
                                       places=12)
        ch = random_stinespring_channel(3, 3, root.child(99))
        for mu in (1 / 3, 0.6, 1.0):
            self.assertAlmostEqual(self.service.forbit_raw(ch, mu), self.service.forbit_analytic(ch, mu),
                                   places=12)

    def test_orbit_endpoints(self):
        f_prod = self.service.fprod_analytic(self.channel)
        self.assertAlmostEqual(self.service.forbit_analytic(self.channel, 1.0), f_prod, places=12)
        self.assertAlmostEqual(self.service.forbit_theta(self.channel, 0.0), f_prod, places=12)
        self.assertAlmostEqual(self.service.maximally_entangled_fidelity(self.channel),
                               self.service.forbit_theta(self.channel, math.pi / 4), places=12)

    def test_orbit_fidelity_monte_carlo(self):
        root = SampleStream(seed=41)
        for index, theta in enumerate((0.0, math.pi / 8, math.pi / 4)):
            estimate = self.service.forbit_mc(self.channel, SchmidtOrbit.from_theta(theta), N, root.child(index))
            with self.subTest(theta=theta):
                self.assertWithinSigma(estimate, self.service.forbit_theta(self.channel, theta))

    def test_average_fidelities_monte_carlo(self):
        stream = SampleStream(seed=42)
        self.assertWithinSigma(self.service.favg_mc(self.channel, N, stream.child(0)),
                               self.service.favg_analytic(self.channel))
        self.assertWithinSigma(self.service.fprod_mc(self.channel, N, stream.child(1)),
                               self.service.fprod_analytic(self.channel))

    def test_qutrit_averages_monte_carlo(self):
        ch = random_stinespring_channel(3, 3, SampleStream(seed=3))
        stream = SampleStream(seed=43)
        self.assertWithinSigma(self.service.favg_mc(ch, N, stream.child(0)), self.service.favg_analytic(ch))
        self.assertWithinSigma(self.service.fprod_mc(ch, N, stream.child(1)), self.service.fprod_analytic(ch))

    def test_orbit_domain(self):
        with self.assertRaises(ParameterDomainError):
            self.service.forbit_analytic(self.channel, 0.4)
        with self.assertRaises(ParameterDomainError):
            self.service.forbit_theta(self.channel, 1.0)
        with self.assertRaises(DimensionError):
            self.service.forbit_analytic(random_stinespring_channel(2, 3, SampleStream(seed=1)), 0.8)

    def test_profile(self):
        profile = self.service.profile(controlled_phase(math.pi))
        self.assertAlmostEqual(profile.f_avg, 0.4)
        self.assertAlmostEqual(profile.chi_F, -2 / 45)
        mus = [mu for mu, _ in profile.orbit_curve]
        self.assertAlmostEqual(mus[0], 0.5)
        self.assertEqual(mus[-1], 1.0)
        self.assertEqual(profile.orbit_curve[-1][1], profile.f_prod)
        self.assertEqual(set(profile.as_dict()), {'f_avg', 'f_prod', 'chi_F', 'orbit_curve', 'reference'})
