"""
Tests pour les nœuds corrigés, l'analyse de Ξⁿ et les balayages
"""

import math
import unittest

import numpy as np
import pandas as pd

from src.capacity import CapacityBoundParams, continuity_capacity_bound, diamond_distance_interval
from src.channels import channels_equal, compose, identity_channel, power
from src.config import Config
from src.exceptions import DimensionMismatchError, InvalidGridError, OutOfRangeError
from src.network import (
    SWEEP_COLUMNS,
    NodeSpec,
    SweepConfig,
    analyze_sequence,
    bosonic_ad_capacity_bound,
    build_node,
    entanglement_horizon,
    iter_sequence,
    node_mu,
    resolve_epsilon,
    sequence_row,
    sweep,
)
from src.noise import FockTruncation, amplitude_damping, bosonic_ad_kraus
from src.qec import cly_code, cly_error_curve, cly_error_set, cly_noise, repetition_code, trivial_code


def _brute_force_horizon(epsilon: float) -> int:
    n = 0
    while continuity_capacity_bound(CapacityBoundParams(epsilon=epsilon, n=n + 1)) > 0.0:
        n += 1
    return n


class TestHorizon(unittest.TestCase):

    def test_matches_linear_scan(self):
        for epsilon in (0.0005, 0.001, 0.01, 0.05):
            self.assertEqual(entanglement_horizon(epsilon), _brute_force_horizon(epsilon))

    def test_depends_on_product(self):
        """La borne ne dépend que de nε"""
        a = entanglement_horizon(0.0005) * 0.0005
        b = entanglement_horizon(0.001) * 0.001
        self.assertLess(abs(a - b), 0.001)

    def test_positive_at_horizon(self):
        h = entanglement_horizon(0.0005)
        self.assertGreater(continuity_capacity_bound(CapacityBoundParams(epsilon=0.0005, n=h)), 0.0)
        self.assertLessEqual(continuity_capacity_bound(CapacityBoundParams(epsilon=0.0005, n=h + 1)), 0.0)

    def test_zero_epsilon(self):
        with self.assertRaises(OutOfRangeError):
            entanglement_horizon(0.0)


class TestBosonicBound(unittest.TestCase):

    def test_value(self):
        self.assertAlmostEqual(bosonic_ad_capacity_bound(0.01, 10), 0.6164, places=3)

    def test_same_as_continuity(self):
        for gamma in (0.001, 0.01, 0.05):
            for n in range(0, 30, 7):
                expected = continuity_capacity_bound(CapacityBoundParams(epsilon=49 * gamma ** 2, n=n))
                self.assertAlmostEqual(bosonic_ad_capacity_bound(gamma, n), expected, places=12)

    def test_range(self):
        with self.assertRaises(OutOfRangeError):
            bosonic_ad_capacity_bound(0.0, 1)
        with self.assertRaises(OutOfRangeError):
            bosonic_ad_capacity_bound(0.1, -1)


class TestNode(unittest.TestCase):

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            NodeSpec(noise=amplitude_damping(0.1), code=repetition_code())

    def test_epsilon_range(self):
        with self.assertRaises(OutOfRangeError):
            NodeSpec(noise=amplitude_damping(0.1), code=trivial_code(2), epsilon=1.5)
        with self.assertRaises(OutOfRangeError):
            NodeSpec(noise=amplitude_damping(0.1), code=trivial_code(2), epsilon_source='guess')

    def test_trivial_code_node(self):
        spec = NodeSpec(noise=amplitude_damping(0.2), code=trivial_code(2))
        node = build_node(spec)
        self.assertTrue(channels_equal(node, amplitude_damping(0.2)))
        epsilon, source = resolve_epsilon(spec, node)
        self.assertEqual(source, 'diamond')
        self.assertGreater(epsilon, 0.0)
        self.assertLessEqual(epsilon, 1.0)

    def test_given_epsilon(self):
        spec = NodeSpec(noise=amplitude_damping(0.2), code=trivial_code(2), epsilon=0.01)
        self.assertEqual(resolve_epsilon(spec, build_node(spec)), (0.01, 'given'))

    def test_tail_source(self):
        spec = NodeSpec(noise=amplitude_damping(0.2), code=trivial_code(2), epsilon_source='tail')
        epsilon, source = resolve_epsilon(spec, build_node(spec))
        self.assertEqual(source, 'tail')
        self.assertAlmostEqual(epsilon, 0.0, places=12)

    def test_cly_node(self):
        gamma = 0.01
        spec = NodeSpec(noise=cly_noise(gamma), code=cly_code(), corrected=cly_error_set(gamma))
        node = build_node(spec)
        self.assertEqual((node.dim_in, node.dim_out), (2, 2))
        epsilon, source = resolve_epsilon(spec, node)
        self.assertEqual(source, 'tail')
        self.assertAlmostEqual(epsilon, cly_error_curve([gamma])[0].exact_norm, places=10)
        self.assertLessEqual(epsilon, 49 * gamma ** 2)

    def test_node_mu(self):
        self.assertAlmostEqual(node_mu(amplitude_damping(0.19)), 0.9, places=12)
        self.assertIsNone(node_mu(bosonic_ad_kraus(0.1, FockTruncation(2))))
        with self.assertLogs('src.network', level='WARNING'):
            self.assertIsNone(node_mu(identity_channel(2)))


class TestSequence(unittest.TestCase):

    def setUp(self):
        self.config = Config(threads=1)
        self.spec = NodeSpec(noise=amplitude_damping(0.1), code=trivial_code(2))

    def test_sequence_row(self):
        row = sequence_row(0.0005, 0.9995, 44)
        self.assertAlmostEqual(row.capacity_lower, 0.80277, places=4)
        self.assertAlmostEqual(row.distance_upper, 0.022)
        self.assertAlmostEqual(row.R_n, 0.98906, places=5)
        self.assertTrue(row.entanglement_feasible)
        self.assertIsNone(sequence_row(0.0005, 0.9995, 0).R_n)
        self.assertIsNone(sequence_row(0.0005, None, 3).R_n)

    def test_analyze_sequence(self):
        report = analyze_sequence(self.spec, 8, self.config)
        self.assertEqual([r.n for r in report.rows], list(range(9)))
        self.assertEqual(report.epsilon_source, 'diamond')
        self.assertAlmostEqual(report.mu, math.sqrt(0.9), places=12)
        checked = [r.n for r in report.rows if r.diamond_lower is not None]
        self.assertEqual(checked, [1, 2, 4, 8])
        for row in report.rows:
            if row.diamond_lower is not None:
                self.assertLessEqual(row.diamond_lower, row.n * report.epsilon + 1e-9)
                self.assertLessEqual(row.diamond_lower, row.diamond_upper + 1e-12)

    def test_diamond_check_limit(self):
        config = Config(threads=1, diamond_check_max=2)
        report = analyze_sequence(self.spec, 8, config)
        checked = [r.n for r in report.rows if r.diamond_lower is not None]
        self.assertEqual(checked, [1, 2])

    def test_semigroup_consistency(self):
        """Les intervalles obtenus par élévations au carré successives valent ceux de power(Ξ, n)"""
        report = analyze_sequence(self.spec, 8, self.config)
        node = build_node(self.spec)
        ident = identity_channel(2)
        for row in report.rows:
            if row.diamond_lower is None:
                continue
            direct = diamond_distance_interval(power(node, row.n), ident)
            self.assertAlmostEqual(row.diamond_lower, direct.lower, places=9)
            self.assertAlmostEqual(row.diamond_upper, direct.upper, places=9)
        self.assertTrue(channels_equal(power(node, 8), compose(power(node, 3), power(node, 5))))

    def test_iter_matches_analyze(self):
        rows = list(iter_sequence(self.spec, 5, self.config))
        self.assertEqual(rows, analyze_sequence(self.spec, 5, self.config).rows)

    def test_to_frame(self):
        df = analyze_sequence(self.spec, 3, self.config).to_frame()
        self.assertEqual(len(df), 4)
        self.assertIn('capacity_lower', df.columns)

    def test_negative_n_max(self):
        with self.assertRaises(OutOfRangeError):
            analyze_sequence(self.spec, -1, self.config)


class TestSweep(unittest.TestCase):

    def test_amplitude_damping_sweep(self):
        df = sweep(SweepConfig(model='ad', params=[0.2, 0.1], n_values=[0, 1, 2],
                               config=Config(threads=1)))
        self.assertEqual(list(df.columns), SWEEP_COLUMNS)
        self.assertEqual(len(df), 6)
        self.assertEqual(list(df['param']), [0.2, 0.2, 0.2, 0.1, 0.1, 0.1])
        self.assertEqual(list(df['n']), [0, 1, 2] * 2)
        self.assertTrue(df['feasible'].iloc[0])

    def test_threads_do_not_change_output(self):
        params = [0.01, 0.02, 0.05, 0.1]
        serial = sweep(SweepConfig(model='ad', params=params, n_values=range(5),
                                   config=Config(threads=1)))
        threaded = sweep(SweepConfig(model='ad', params=params, n_values=range(5),
                                     config=Config(threads=4)))
        pd.testing.assert_frame_equal(serial, threaded)

    def test_bosonic_sweep(self):
        df = sweep(SweepConfig(model='bosonic-ad', params=[0.01], n_values=[10],
                               config=Config(threads=1)))
        self.assertAlmostEqual(df['epsilon'].iloc[0], 49 * 0.01 ** 2)
        self.assertAlmostEqual(df['capacity_lower'].iloc[0], bosonic_ad_capacity_bound(0.01, 10), places=12)
        self.assertTrue(df['mu'].isna().all())

    def test_bosonic_sweep_large_gamma(self):
        """49γ² > 1 : ε ramené à 1 au lieu d'interrompre le balayage"""
        with self.assertLogs('src.network', level='WARNING'):
            df = sweep(SweepConfig(model='bosonic-ad', params=[0.2], n_values=[0, 1],
                                   config=Config(threads=1)))
        self.assertEqual(list(df['epsilon']), [1.0, 1.0])
        expected = continuity_capacity_bound(CapacityBoundParams(epsilon=1.0, n=1))
        self.assertEqual(df['capacity_lower'].iloc[1], expected)
        self.assertFalse(df['feasible'].iloc[1])

    def test_pure_loss_sweep(self):
        df = sweep(SweepConfig(model='pure-loss', params=[0.9], n_values=[1], cutoff=4, k=1,
                               config=Config(threads=1)))
        self.assertAlmostEqual(df['epsilon'].iloc[0], 0.0523, places=10)

    def test_monotone_along_n(self):
        params = [0.1, 0.2, 0.3, 0.4, 0.5]
        df = sweep(SweepConfig(model='ad', params=params, n_values=range(1, 51),
                               config=Config(threads=2)))
        self.assertEqual(len(df), 250)
        for _, group in df.groupby('param', sort=False):
            values = group['capacity_lower'].to_numpy()
            self.assertTrue(np.all(np.diff(values) <= 0.0))

    def test_single_cell_matches_sequence(self):
        config = Config(threads=1)
        df = sweep(SweepConfig(model='ad', params=[0.1], n_values=[3], config=config))
        row = analyze_sequence(NodeSpec(noise=amplitude_damping(0.1), code=trivial_code(2)),
                               3, config).rows[3]
        self.assertEqual(df['capacity_lower'].iloc[0], row.capacity_lower)
        self.assertEqual(df['R_n'].iloc[0], row.R_n)

    def test_invalid_grid(self):
        with self.assertRaises(InvalidGridError):
            SweepConfig(model='unknown', params=[0.1], n_values=[1])
        with self.assertRaises(InvalidGridError):
            SweepConfig(model='ad', params=[], n_values=[1])
        with self.assertRaises(InvalidGridError):
            SweepConfig(model='ad', params=[0.1], n_values=[-1])
        with self.assertRaises(InvalidGridError):
            SweepConfig(model='ad', params=[float('nan')], n_values=[1])


if __name__ == '__main__':
    unittest.main()
