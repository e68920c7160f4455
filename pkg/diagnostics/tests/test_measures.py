import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DimensionError, NonPhysicalStateError
from core.sampling import ProductStateSampler, SampleStream, sample_haar_states
from diagnostics.tools.measures import (
    concurrence,
    concurrence_pure,
    delta_P,
    global_impurity,
    linear_entropy,
    negativity,
    state_measures,
    tangle,
)

BELL = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)


def projector(psi):
    return np.outer(psi, psi.conj())


def werner(p):
    return p * projector(BELL) + (1 - p) * np.eye(4) / 4


def schmidt_state(theta):
    return np.array([math.cos(theta), 0, 0, math.sin(theta)], dtype=complex)


class PureStateMeasuresTests(SimpleTestCase):

    def test_bell_state(self):
        rho = projector(BELL)
        self.assertAlmostEqual(concurrence(rho), 1.0, places=10)
        self.assertAlmostEqual(negativity(rho), 0.5, places=10)
        self.assertAlmostEqual(linear_entropy(rho), 0.5, places=12)
        self.assertAlmostEqual(global_impurity(rho), 0.0, places=12)
        self.assertAlmostEqual(tangle(rho), 1.0, places=9)

    def test_product_state(self):
        psi = np.kron([1, 1j], [math.cos(0.3), math.sin(0.3)]) / math.sqrt(2)
        rho = projector(psi)
        self.assertAlmostEqual(concurrence(rho), 0.0, places=10)
        self.assertAlmostEqual(negativity(rho), 0.0, places=10)
        self.assertAlmostEqual(linear_entropy(rho), 0.0, places=12)

    def test_schmidt_angle(self):
        for theta in (0.1, math.pi / 8, 0.6):
            rho = projector(schmidt_state(theta))
            with self.subTest(theta=theta):
                self.assertAlmostEqual(concurrence(rho), math.sin(2 * theta), places=9)
                self.assertAlmostEqual(negativity(rho), 0.5 * math.sin(2 * theta), places=9)
                self.assertAlmostEqual(linear_entropy(rho), 0.5 * math.sin(2 * theta) ** 2, places=12)

    def test_pure_state_shortcut_matches_mixed_path(self):
        rng = np.random.default_rng(4)
        psi = rng.standard_normal((20, 4)) + 1j * rng.standard_normal((20, 4))
        psi /= np.linalg.norm(psi, axis=1, keepdims=True)
        rho = psi[:, :, None] * psi.conj()[:, None, :]
        np.testing.assert_allclose(concurrence_pure(psi), concurrence(rho), atol=1e-9)
        np.testing.assert_allclose(negativity(rho), concurrence(rho) / 2, atol=1e-9)

    def test_concurrence_pure_shapes(self):
        self.assertAlmostEqual(concurrence_pure(BELL), 1.0)
        self.assertAlmostEqual(concurrence_pure(BELL.reshape(4, 1)), 1.0)
        with self.assertRaises(NonPhysicalStateError):
            concurrence_pure(2 * BELL)
        with self.assertRaises(DimensionError):
            concurrence_pure(np.ones(3) / math.sqrt(3))

    def test_delta_p_of_pure_state_is_linear_entropy(self):
        rho = projector(schmidt_state(0.4))
        self.assertAlmostEqual(delta_P(rho, traced='A'), linear_entropy(rho), places=12)
        self.assertAlmostEqual(delta_P(rho, traced='B'), linear_entropy(rho), places=12)

    def test_pure_tangle_is_twice_linear_entropy(self):
        psi = sample_haar_states(4, 100, SampleStream(seed=21).generator())
        rho = psi[:, :, None] * psi.conj()[:, None, :]
        np.testing.assert_allclose(tangle(rho), 2 * linear_entropy(rho), atol=1e-9)
        np.testing.assert_allclose(concurrence_pure(psi) ** 2, 2 * linear_entropy(rho), atol=1e-12)


class MixedStateMeasuresTests(SimpleTestCase):

    def test_werner_family(self):
        for p in (0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0):
            rho = werner(p)
            with self.subTest(p=p):
                self.assertAlmostEqual(concurrence(rho), max(0.0, (3 * p - 1) / 2), places=8)
                self.assertAlmostEqual(negativity(rho), max(0.0, (3 * p - 1) / 4), places=10)
                self.assertAlmostEqual(linear_entropy(rho), 0.5, places=12)

    def test_maximally_mixed(self):
        rho = np.eye(4) / 4
        self.assertAlmostEqual(global_impurity(rho), 0.75)
        self.assertAlmostEqual(delta_P(rho), 0.25 - 0.5)

    def test_stack_matches_single_evaluations(self):
        rng = np.random.default_rng(9)
        g = rng.standard_normal((8, 4, 4)) + 1j * rng.standard_normal((8, 4, 4))
        rho = g @ np.conj(np.swapaxes(g, -1, -2))
        rho /= np.trace(rho, axis1=1, axis2=2).real[:, None, None]
        stacked = concurrence(rho)
        self.assertEqual(stacked.shape, (8,))
        for i in range(8):
            self.assertAlmostEqual(stacked[i], concurrence(rho[i]), places=12)
            self.assertLessEqual(negativity(rho[i]), concurrence(rho[i]) / 2 + 1e-9)

    def test_tangle_between_purity_gap_and_linear_entropy(self):
        # Estados de rango k como trazas parciales de estados de Haar en 4×k
        root = SampleStream(seed=22)
        for index, k in enumerate((1, 2, 4)):
            psi = sample_haar_states(4 * k, 1000, root.child(index).generator()).reshape(1000, 4, k)
            rho = psi @ np.conj(np.swapaxes(psi, -1, -2))
            tau = tangle(rho)
            lower = 2 * np.maximum(delta_P(rho, traced='A'), delta_P(rho, traced='B'))
            with self.subTest(rank=k):
                self.assertTrue(np.all(np.isfinite(tau)))
                self.assertLessEqual(float(np.max(lower - tau)), 1e-9)
                self.assertLessEqual(float(np.max(tau - 2 * linear_entropy(rho))), 1e-9)

    def test_separable_outputs_have_zero_entanglement(self):
        psi = ProductStateSampler(2, 2)(50, SampleStream(seed=8).generator())
        rho = psi[:, :, None] * psi.conj()[:, None, :]
        self.assertLess(np.max(concurrence(rho)), 1e-9)
        self.assertLess(np.max(negativity(rho)), 1e-9)

    def test_qutrit_negativity(self):
        psi = np.zeros(9, dtype=complex)
        psi[[0, 4, 8]] = 1 / math.sqrt(3)
        self.assertAlmostEqual(negativity(projector(psi), 3, 3), 1.0, places=9)
        self.assertAlmostEqual(linear_entropy(projector(psi), 3, 3), 2 / 3, places=12)


class MeasureValidationTests(SimpleTestCase):

    def test_rejects_non_density_matrices(self):
        with self.assertRaises(NonPhysicalStateError):
            concurrence(np.eye(4))
        with self.assertRaises(NonPhysicalStateError):
            negativity(np.diag([1.5, -0.5, 0, 0]))

    def test_concurrence_requires_two_qubits(self):
        with self.assertRaises(DimensionError):
            concurrence(np.eye(9) / 9)

    def test_delta_p_subsystem(self):
        with self.assertRaises(ValueError):
            delta_P(np.eye(4) / 4, traced='C')

    def test_state_measures(self):
        data = state_measures(werner(0.8)).as_dict()
        self.assertAlmostEqual(data['concurrence'], 0.7, places=8)
        self.assertAlmostEqual(data['tangle'], 0.49, places=8)
        self.assertEqual(set(data), {'concurrence', 'negativity', 'linear_entropy', 'tangle',
                                     'delta_P_A', 'delta_P_B'})
