"""
Tests pour les modèles de bruit
"""

import unittest

import numpy as np

from src.channels import apply_map, validate_channel
from src.exceptions import OutOfRangeError
from src.noise import (
    FockTruncation,
    amplitude_damping,
    annihilation,
    bosonic_ad_kraus,
    depolarizing,
    fock_state,
    independent,
    number_operator,
    pure_loss_kraus,
)


class TestQubitNoise(unittest.TestCase):

    def test_amplitude_damping_kraus(self):
        c = amplitude_damping(0.36)
        np.testing.assert_allclose(c.kraus[0], np.diag([1.0, 0.8]))
        self.assertAlmostEqual(c.kraus[1][0, 1].real, 0.6)

    def test_gamma_out_of_range(self):
        with self.assertRaises(OutOfRangeError):
            amplitude_damping(1.2)
        with self.assertRaises(OutOfRangeError):
            amplitude_damping(-0.1)

    def test_depolarizing_action(self):
        rho = np.diag([1.0, 0.0])
        out = apply_map(depolarizing(0.4), rho)
        np.testing.assert_allclose(out, 0.6 * rho + 0.2 * np.eye(2), atol=1e-14)


class TestBosonicNoise(unittest.TestCase):

    def test_truncation_dims(self):
        trunc = FockTruncation(cutoff=4, modes=2)
        self.assertEqual(trunc.mode_dim, 5)
        self.assertEqual(trunc.dim, 25)

    def test_bosonic_ad_trace_preserving(self):
        for gamma in (0.0, 0.01, 0.3, 1.0):
            c = bosonic_ad_kraus(gamma, FockTruncation(4))
            self.assertEqual(c.n_kraus, 5)
            self.assertTrue(validate_channel(c).passed)

    def test_bosonic_ad_single_loss(self):
        """B₁|1⟩ = √γ |0⟩"""
        gamma = 0.04
        b1 = bosonic_ad_kraus(gamma, FockTruncation(3)).kraus[1]
        self.assertAlmostEqual(b1[0, 1].real, 0.2)
        self.assertAlmostEqual(b1[1, 2].real, np.sqrt(2 * gamma * (1 - gamma)))

    def test_pure_loss_is_ad_with_loss(self):
        a = pure_loss_kraus(0.9, FockTruncation(4))
        b = bosonic_ad_kraus(0.1, FockTruncation(4))
        for x, y in zip(a.kraus, b.kraus):
            np.testing.assert_allclose(x, y, atol=1e-15)

    def test_mean_photon_number_decays(self):
        trunc = FockTruncation(4)
        n_op = number_operator(trunc)
        rho = np.outer(fock_state(trunc, (4,)), fock_state(trunc, (4,)))
        out = apply_map(pure_loss_kraus(0.7, trunc), rho)
        self.assertAlmostEqual(np.trace(n_op @ out).real, 4 * 0.7)

    def test_multi_mode_rejected(self):
        with self.assertRaises(OutOfRangeError):
            bosonic_ad_kraus(0.1, FockTruncation(4, modes=2))

    def test_annihilation(self):
        a = annihilation(FockTruncation(3))
        self.assertAlmostEqual(a[1, 2].real, np.sqrt(2))
        np.testing.assert_allclose(np.diag(a.conj().T @ a).real, [0, 1, 2, 3])

    def test_fock_state_two_modes(self):
        psi = fock_state(FockTruncation(4, modes=2), (2, 2))
        self.assertEqual(psi.size, 25)
        self.assertEqual(int(np.argmax(np.abs(psi))), 12)
        with self.assertRaises(OutOfRangeError):
            fock_state(FockTruncation(4, modes=2), (5, 0))

    def test_independent(self):
        c = independent(bosonic_ad_kraus(0.1, FockTruncation(4)), 2)
        self.assertEqual((c.dim_in, c.n_kraus), (25, 25))
        self.assertTrue(validate_channel(c).passed)
        with self.assertRaises(OutOfRangeError):
            independent(c, 0)


if __name__ == '__main__':
    unittest.main()
