import json
import os
import shutil
import tempfile
from unittest import TestCase

import numpy as np

from pyEntangle.core.rank2 import Rank2Family, rank2_p_bounds
from pyEntangle.core.sweep import FIG4A_COLUMNS, FIG4B_COLUMNS, RANK2_COLUMNS, SweepConfig, hhl_sweep, \
    rank2_curve, write_meta, write_table
from pyEntangle.internal.errors import ValidationError


class TestSweepConfig(TestCase):

    def test_defaults(self):
        config = SweepConfig()
        self.assertEqual(config.grid_points, 101)
        self.assertEqual(config.separator, ',')
        self.assertEqual(len(config.grid()), 101)

    def test_invalid_values(self):
        for kwargs in ({'grid_points': 1}, {'rotation_constant': 0.0}, {'rotation_constant': 1.2},
                       {'format': 'xlsx'}, {'workers': 0}, {'b0_squared_range': (0.5, 0.2)}):
            with self.assertRaises(ValidationError):
                SweepConfig(**kwargs)

    def test_tsv(self):
        config = SweepConfig(format='tsv', output_dir='out')
        self.assertEqual(config.separator, '\t')
        self.assertEqual(config.path('fig4a'), os.path.join('out', 'fig4a.tsv'))


class TestHhlSweep(TestCase):

    @classmethod
    def setUpClass(cls):
        cls.tangles, cls.pi_tangles = hhl_sweep(SweepConfig(grid_points=11))

    def test_shape(self):
        self.assertEqual(list(self.tangles.columns), FIG4A_COLUMNS)
        self.assertEqual(list(self.pi_tangles.columns), FIG4B_COLUMNS)
        self.assertEqual(len(self.tangles), 11)

    def test_endpoint(self):
        """ b0^2 = 1 gives a maximally entangled first stage and an unentangled last stage """
        row = self.tangles.iloc[-1]
        self.assertAlmostEqual(row['tau3_psi1'], 1.0, places=12)
        self.assertEqual(row['tau3_rho3'], 0.0)

    def test_equal_amplitudes_row(self):
        tangles, pi_tangles = self.tangles.iloc[5], self.pi_tangles.iloc[5]
        self.assertAlmostEqual(tangles['b0_sq'], 0.5)
        for column in FIG4A_COLUMNS[1:]:
            self.assertAlmostEqual(tangles[column], 0.0, places=12)
        for column in FIG4B_COLUMNS[1:]:
            self.assertAlmostEqual(pi_tangles[column], 0.0, places=12)

    def test_values_in_range(self):
        values = self.pi_tangles[FIG4B_COLUMNS[1:]].to_numpy()
        self.assertGreaterEqual(values.min(), 0.0)
        self.assertLessEqual(values.max(), 1.0 + 1e-12)

    def test_workers_keep_grid_order(self):
        tangles, _ = hhl_sweep(SweepConfig(grid_points=11, workers=3))
        np.testing.assert_array_equal(tangles.to_numpy(), self.tangles.to_numpy())


class TestRank2Curve(TestCase):

    @classmethod
    def setUpClass(cls):
        cls.frame = rank2_curve(0.3, theta_steps=63, p_steps=21)

    def test_columns(self):
        self.assertEqual(list(self.frame.columns), RANK2_COLUMNS)

    def test_marks(self):
        """ p- and p+ = (1 -/+ 0.82) / 2 are inserted into the p grid and flagged """
        p_minus, p_plus = rank2_p_bounds(Rank2Family(0.3, 0.0))
        marked = self.frame.loc[self.frame['p_mark'] != '', ['p', 'p_mark']].drop_duplicates()
        self.assertEqual(list(marked['p_mark']), ['p-', 'p+'])
        np.testing.assert_allclose(marked['p'], [p_minus, p_plus])

    def test_hull_zero_between_bounds(self):
        p_minus, p_plus = rank2_p_bounds(Rank2Family(0.3, 0.0))
        inside = self.frame[(self.frame['p'] >= p_minus) & (self.frame['p'] <= p_plus)]
        self.assertEqual(inside['convex_hull'].abs().max(), 0.0)

    def test_ordering(self):
        p = self.frame['p'].to_numpy()
        self.assertTrue(np.all(np.diff(p) >= 0))
        first = self.frame[self.frame['p'] == p[0]]
        self.assertEqual(len(first), 63)
        self.assertTrue(np.all(np.diff(first['theta'].to_numpy()) > 0))

    def test_curve_above_f(self):
        self.assertGreaterEqual((self.frame['tau3_Z'] - self.frame['f_p']).min(), -1e-12)

    def test_symmetric_family_single_mark(self):
        """ At x1 = 1/sqrt(2) only p = 1/2 is marked and the hull equals f everywhere else """
        frame = rank2_curve(1 / np.sqrt(2), theta_steps=5, p_steps=11)
        marked = frame.loc[frame['p_mark'] != '', ['p', 'p_mark']].drop_duplicates()
        self.assertEqual(list(marked['p_mark']), ['p-=p+'])
        self.assertEqual(list(marked['p']), [0.5])
        self.assertEqual(len(frame), 5 * 11)
        outside = frame[frame['p'] != 0.5]
        np.testing.assert_allclose(outside['convex_hull'], outside['f_p'])

    def test_invalid_steps(self):
        with self.assertRaises(ValidationError):
            rank2_curve(0.3, theta_steps=0)

    def test_invalid_x1(self):
        with self.assertRaises(ValidationError):
            rank2_curve(1.5)


class TestWriters(TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_table_is_reproducible(self):
        config = SweepConfig(grid_points=5, output_dir=os.path.join(self.directory, 'nested'))
        tangles, _ = hhl_sweep(config)
        path = write_table(tangles, config, 'fig4a')
        with open(path, 'rb') as handle:
            first = handle.read()
        write_table(hhl_sweep(config)[0], config, 'fig4a')
        with open(path, 'rb') as handle:
            second = handle.read()

        self.assertEqual(first, second)
        self.assertNotIn(b'\r', first)
        self.assertTrue(first.startswith(b'b0_sq,tau3_psi1,tau3_rho2,tau3_rho3\n'))
        self.assertEqual(first.count(b'\n'), 6)

    def test_tsv(self):
        config = SweepConfig(grid_points=3, output_dir=self.directory, format='tsv')
        path = write_table(hhl_sweep(config)[1], config, 'fig4b')
        self.assertTrue(path.endswith('fig4b.tsv'))
        with open(path) as handle:
            self.assertEqual(handle.readline().rstrip('\n').split('\t'), FIG4B_COLUMNS)

    def test_meta(self):
        config = SweepConfig(grid_points=3, output_dir=self.directory)
        path = write_meta(config, 'hhl-sweep', {'grid_points': 3}, '1.0.0')
        with open(path) as handle:
            meta = json.load(handle)
        self.assertEqual(meta['command'], 'hhl-sweep')
        self.assertEqual(meta['config']['grid_points'], 3)
        self.assertEqual(meta['version'], '1.0.0')
