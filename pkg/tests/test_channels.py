"""
Tests pour l'algèbre des canaux
"""

import unittest

import numpy as np

from src.channels import (
    DensityOperator,
    QuantumChannel,
    apply,
    apply_map,
    channels_equal,
    choi,
    complementary,
    compose,
    identity_channel,
    minimal_kraus,
    power,
    require_valid,
    tensor,
    validate_channel,
)
from src.exceptions import (
    ChannelValidationError,
    ComputationError,
    DimensionMismatchError,
    NotEndomorphicError,
    OutOfRangeError,
    ShapeMismatchError,
)
from src.noise import amplitude_damping, bit_flip, depolarizing
from src.sampling import make_rng, random_density_matrix, random_kraus


class TestQuantumChannel(unittest.TestCase):
    """Construction et validation"""

    def test_shape_checked(self):
        with self.assertRaises(ShapeMismatchError):
            QuantumChannel(2, 2, (np.eye(3),))

    def test_empty_kraus_rejected(self):
        with self.assertRaises(ShapeMismatchError):
            QuantumChannel(2, 2, ())

    def test_amplitude_damping_valid(self):
        report = validate_channel(amplitude_damping(0.3))
        self.assertTrue(report.passed)
        self.assertLess(report.defect, 1e-12)

    def test_non_trace_preserving(self):
        c = QuantumChannel(2, 2, (0.9 * np.eye(2),))
        report = validate_channel(c)
        self.assertFalse(report.passed)
        self.assertAlmostEqual(report.defect, 0.19)
        with self.assertRaises(ChannelValidationError):
            require_valid(c)

    def test_random_channels_valid(self):
        rng = make_rng(11)
        for d_in, d_out, r in ((2, 2, 3), (3, 2, 4), (2, 5, 2)):
            c = QuantumChannel(d_in, d_out, tuple(random_kraus(d_in, d_out, r, rng)))
            self.assertTrue(validate_channel(c).passed)


class TestDensityOperator(unittest.TestCase):

    def test_bad_trace(self):
        with self.assertRaises(ComputationError):
            DensityOperator(dim=2, matrix=np.eye(2))

    def test_negative_eigenvalue(self):
        with self.assertRaises(ComputationError):
            DensityOperator(dim=2, matrix=np.diag([1.5, -0.5]))

    def test_from_amplitudes(self):
        rho = DensityOperator.from_amplitudes([1 / np.sqrt(2), 1 / np.sqrt(2)])
        np.testing.assert_allclose(rho.matrix, 0.5 * np.ones((2, 2)), atol=1e-15)

    def test_from_amplitudes_bad_norm(self):
        with self.assertRaises(OutOfRangeError):
            DensityOperator.from_amplitudes([1.0, 1.0])


class TestChannelAlgebra(unittest.TestCase):
    """Composition, puissances, Choi et complémentaire"""

    def setUp(self):
        self.rng = make_rng(2024)

    def test_apply_amplitude_damping(self):
        rho = DensityOperator(dim=2, matrix=np.diag([0.0, 1.0]))
        out = apply(amplitude_damping(0.25), rho)
        np.testing.assert_allclose(out.matrix, np.diag([0.25, 0.75]), atol=1e-15)

    def test_apply_keeps_trace_of_image(self):
        """Un canal non trace-préservant n'est pas renormalisé en silence"""
        shrink = QuantumChannel(2, 2, (0.9 * np.eye(2),))
        rho = DensityOperator.from_amplitudes([1.0, 0.0])
        np.testing.assert_allclose(np.trace(apply_map(shrink, rho.matrix)).real, 0.81)
        with self.assertRaises(ChannelValidationError):
            apply(shrink, rho)

    def test_apply_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            apply(amplitude_damping(0.1), DensityOperator.maximally_mixed(3))

    def test_compose_order(self):
        """outer ∘ inner : inner appliqué en premier"""
        a = amplitude_damping(0.3)
        b = bit_flip(1.0)
        rho = np.diag([0.0, 1.0])
        out = apply_map(compose(b, a), rho)
        expected = apply_map(b, apply_map(a, rho))
        np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_compose_associative(self):
        a, b, c = amplitude_damping(0.2), depolarizing(0.3), bit_flip(0.1)
        left = compose(compose(a, b), c)
        right = compose(a, compose(b, c))
        self.assertTrue(channels_equal(left, right))

    def test_compose_dimension_mismatch(self):
        rect = QuantumChannel(2, 3, tuple(random_kraus(2, 3, 2, self.rng)))
        with self.assertRaises(DimensionMismatchError):
            compose(rect, rect)

    def test_compose_prunes_kraus(self):
        c = compose(depolarizing(0.5), depolarizing(0.5))
        self.assertLessEqual(c.n_kraus, 4)
        self.assertTrue(channels_equal(c, depolarizing(0.75)))

    def test_power(self):
        c = amplitude_damping(0.2)
        self.assertTrue(channels_equal(power(c, 0), identity_channel(2)))
        self.assertTrue(channels_equal(power(c, 5), amplitude_damping(1.0 - 0.8 ** 5)))

    def test_power_errors(self):
        rect = QuantumChannel(2, 3, tuple(random_kraus(2, 3, 2, self.rng)))
        with self.assertRaises(NotEndomorphicError):
            power(rect, 2)
        with self.assertRaises(OutOfRangeError):
            power(amplitude_damping(0.1), -1)

    def test_choi_trace_and_positivity(self):
        c = QuantumChannel(3, 2, tuple(random_kraus(3, 2, 3, self.rng)))
        j = choi(c)
        self.assertAlmostEqual(np.trace(j).real, 3.0, places=10)
        self.assertGreater(np.min(np.linalg.eigvalsh(j)), -1e-10)

    def test_choi_identity(self):
        j = choi(identity_channel(2))
        omega = np.array([1, 0, 0, 1], dtype=complex)
        np.testing.assert_allclose(j, np.outer(omega, omega))

    def test_minimal_kraus_preserves_map(self):
        c = QuantumChannel(2, 2, tuple(random_kraus(2, 2, 6, self.rng)))
        reduced = minimal_kraus(c)
        self.assertLessEqual(reduced.n_kraus, 4)
        self.assertTrue(channels_equal(c, reduced))

    def test_complementary_of_identity(self):
        """Le complémentaire d'un unitaire est trivial (sortie de dimension 1)"""
        comp = complementary(identity_channel(2))
        self.assertEqual(comp.dim_out, 1)
        rho = random_density_matrix(2, self.rng)
        np.testing.assert_allclose(apply_map(comp, rho), [[1.0]], atol=1e-12)

    def test_complementary_valid(self):
        c = QuantumChannel(2, 3, tuple(random_kraus(2, 3, 4, self.rng)))
        comp = complementary(c)
        self.assertEqual((comp.dim_in, comp.dim_out), (2, 4))
        self.assertTrue(validate_channel(comp).passed)

    def test_tensor(self):
        t = tensor(amplitude_damping(0.1), bit_flip(0.2))
        self.assertEqual((t.dim_in, t.n_kraus), (4, 4))
        self.assertTrue(validate_channel(t).passed)

    def test_channels_equal_dimensions(self):
        self.assertFalse(channels_equal(identity_channel(2), identity_channel(3)))


if __name__ == '__main__':
    unittest.main()
