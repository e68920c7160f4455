import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import ParameterDomainError
from core.linalg import partial_trace, purity
from core.sampling import (
    HaarStateSampler,
    ProductStateSampler,
    SampleStream,
    SchmidtOrbit,
    haar_pure_state,
    haar_unitary,
    mc_mean,
    mc_samples,
    orbit_state,
    product_state,
    sample_haar_unitaries,
)
from core.tests.mixins import MonteCarloAssertionsMixin

N = 40_000


class FirstAmplitude:

    def __init__(self, power):
        self.power = power

    def __call__(self, psi):
        return np.abs(psi[:, 0]) ** self.power


class Constant:

    def __call__(self, psi):
        return np.full(psi.shape[0], 0.75)


def pair_moment(psi):
    return np.abs(psi[:, 0]) ** 2 * np.abs(psi[:, 1]) ** 2


def absolute_product(psi):
    return np.prod(np.abs(psi), axis=1)


def density(psi):
    return (psi[:, :, None] * psi.conj()[:, None, :]).reshape(psi.shape[0], -1)


class UnitarySampler:

    def __call__(self, count, rng):
        return sample_haar_unitaries(2, count, rng).reshape(count, 4)


class SampleStreamTests(SimpleTestCase):

    def test_same_stream_same_values(self):
        a = SampleStream(seed=7, stream_id=3).generator().standard_normal(16)
        b = SampleStream(seed=7, stream_id=3).generator().standard_normal(16)
        np.testing.assert_array_equal(a, b)

    def test_children_and_blocks_differ(self):
        root = SampleStream(seed=7)
        draws = [
            root.generator().standard_normal(4),
            root.child(0).generator().standard_normal(4),
            root.child(1).generator().standard_normal(4),
            root.block(1).generator().standard_normal(4),
        ]
        for i in range(len(draws)):
            for j in range(i + 1, len(draws)):
                self.assertFalse(np.array_equal(draws[i], draws[j]))

    def test_child_is_deterministic(self):
        root = SampleStream(seed=2**63 + 5)
        self.assertEqual(root.child(4), root.child(4))
        self.assertEqual(root.split(3), [root.child(0), root.child(1), root.child(2)])

    def test_rejects_out_of_range_seed(self):
        with self.assertRaises(ValueError):
            SampleStream(seed=-1)
        with self.assertRaises(ValueError):
            SampleStream(seed=2**64)


class SchmidtOrbitTests(SimpleTestCase):

    def test_theta_parametrization(self):
        orbit = SchmidtOrbit.from_theta(math.pi / 8)
        self.assertAlmostEqual(orbit.purity, 1 - math.sin(math.pi / 4) ** 2 / 2, places=14)
        self.assertAlmostEqual(orbit.theta, math.pi / 8, places=12)

    def test_limits(self):
        self.assertEqual(SchmidtOrbit.product(3).purity, 1.0)
        self.assertAlmostEqual(SchmidtOrbit.maximally_entangled(4).purity, 0.25, places=15)

    def test_invalid_spectra(self):
        with self.assertRaises(ParameterDomainError):
            SchmidtOrbit((0.6, 0.6))
        with self.assertRaises(ParameterDomainError):
            SchmidtOrbit((1.2, -0.2))
        with self.assertRaises(ParameterDomainError):
            SchmidtOrbit.from_theta(1.0)


class HaarSamplingTests(MonteCarloAssertionsMixin, SimpleTestCase):

    def setUp(self):
        self.root = SampleStream(seed=20260601)

    def test_unitarity(self):
        for index in range(5):
            u = haar_unitary(4, self.root.child(index))
            np.testing.assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-10)

    def test_unitary_entry_moments(self):
        second = mc_mean(FirstAmplitude(2), UnitarySampler(), N, self.root.child(10))
        fourth = mc_mean(FirstAmplitude(4), UnitarySampler(), N, self.root.child(11))
        self.assertWithinSigma(second, 0.5)
        self.assertWithinSigma(fourth, 1 / 3)

    def test_pure_state_norm_and_moments(self):
        psi = haar_pure_state(3, self.root.child(20))
        self.assertEqual(psi.shape, (3, 1))
        self.assertAlmostEqual(float(np.linalg.norm(psi)), 1.0, places=12)
        first = mc_mean(density, HaarStateSampler(2), N, self.root.child(21))
        self.assertWithinSigma(first, np.eye(2).reshape(-1) / 2, sigmas=5.0)
        self.assertWithinSigma(mc_mean(pair_moment, HaarStateSampler(2), N, self.root.child(22)), 1 / 6)

    def test_product_state(self):
        psi = product_state(2, 2, self.root.child(30))
        schmidt = np.linalg.svd(psi.reshape(2, 2), compute_uv=False)
        self.assertLess(schmidt[1], 1e-12)
        estimate = mc_mean(absolute_product, ProductStateSampler(2, 2), N, self.root.child(31))
        self.assertWithinSigma(estimate, (math.pi / 8) ** 2)

    def test_orbit_state_reduced_purity(self):
        for lam in ((1.0, 0.0), (0.5, 0.5), (0.8, 0.2)):
            orbit = SchmidtOrbit(lam)
            psi = orbit_state(orbit, self.root.child(40))
            rho_a = partial_trace(np.outer(psi, psi.conj()), 2, 2, 'A')
            self.assertAlmostEqual(purity(rho_a), orbit.purity, places=10)


class MonteCarloTests(MonteCarloAssertionsMixin, SimpleTestCase):

    def setUp(self):
        self.stream = SampleStream(seed=42, stream_id=9)

    def test_constant_integrand(self):
        estimate = mc_mean(Constant(), HaarStateSampler(2), 1000, self.stream)
        self.assertEqual(estimate.mean, 0.75)
        self.assertEqual(estimate.stderr, 0.0)
        self.assertEqual(estimate.n, 1000)

    def test_reproducible(self):
        a = mc_mean(pair_moment, HaarStateSampler(2), 10_000, self.stream)
        b = mc_mean(pair_moment, HaarStateSampler(2), 10_000, self.stream)
        self.assertEqual(a, b)

    def test_block_merge_matches_direct_statistics(self):
        values = mc_samples(pair_moment, HaarStateSampler(2), 10_000, self.stream, block_size=1000)
        estimate = mc_mean(pair_moment, HaarStateSampler(2), 10_000, self.stream, block_size=1000)
        self.assertAlmostEqual(estimate.mean, float(values.mean()), delta=1e-12)
        self.assertAlmostEqual(estimate.stderr, float(values.std() / math.sqrt(values.size)), delta=1e-12)

    def test_parallel_matches_serial(self):
        serial = mc_mean(pair_moment, HaarStateSampler(2), 20_000, self.stream, block_size=2048)
        parallel = mc_mean(pair_moment, HaarStateSampler(2), 20_000, self.stream, workers=2, block_size=2048)
        self.assertEqual(serial.mean, parallel.mean)
        self.assertEqual(serial.stderr, parallel.stderr)

    def test_requires_two_samples(self):
        with self.assertRaises(ValueError):
            mc_mean(pair_moment, HaarStateSampler(2), 1, self.stream)
