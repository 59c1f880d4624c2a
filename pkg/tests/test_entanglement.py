from unittest import TestCase

import numpy as np

from pyEntangle.core.circuit import Gate, apply
from pyEntangle.core.entanglement import EntanglementRecord, analyze_three_qubit, analyze_two_qubit, \
    concurrence_mixed, concurrence_pure, hyperdeterminant, negativity, pi_tangle, three_tangle_pure
from pyEntangle.core.tensor import DensityMatrix, StateVector, bell_state, ghz_state, kron, partial_trace, w_state
from pyEntangle.internal.errors import DimensionError
from tests.utils import bell_density, pi_tangle_w, product_density, random_density, random_state


def grover_oracle_state():
    """ The uniform three-qubit superposition with the sign of |111> flipped """
    amplitudes = np.full(8, 1 / np.sqrt(8))
    amplitudes[7] *= -1
    return StateVector(amplitudes)


def random_local_unitary(rng):
    q, r = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    return Gate(q * (np.diag(r) / np.abs(np.diag(r))))


class TestConcurrence(TestCase):

    def test_uniform_state_is_separable(self):
        self.assertAlmostEqual(concurrence_pure(StateVector.uniform(2)), 0.0, places=15)

    def test_two_qubit_oracle_state(self):
        """ (|00> + |01> + |10> - |11>)/2 is maximally entangled """
        state = StateVector(np.array([1, 1, 1, -1]) / 2)
        self.assertAlmostEqual(concurrence_pure(state), 1.0, places=15)

    def test_basis_state(self):
        self.assertEqual(concurrence_pure(StateVector.basis(2, 0)), 0.0)

    def test_wrong_qubit_count(self):
        with self.assertRaises(DimensionError):
            concurrence_pure(ghz_state())

    def test_mixed_grover_marginal(self):
        reduced = partial_trace(DensityMatrix.from_state(grover_oracle_state()), 2)
        self.assertAlmostEqual(concurrence_mixed(reduced), 0.5, places=10)

    def test_mixed_maximally_mixed(self):
        self.assertEqual(concurrence_mixed(DensityMatrix.maximally_mixed(2)), 0.0)

    def test_mixed_bell(self):
        self.assertAlmostEqual(concurrence_mixed(bell_density()), 1.0, places=10)

    def test_mixed_accepts_state_vector(self):
        self.assertAlmostEqual(concurrence_mixed(bell_state()), 1.0, places=10)

    def test_mixed_wrong_dimension(self):
        with self.assertRaises(DimensionError):
            concurrence_mixed(DensityMatrix.maximally_mixed(3))

    def test_mixed_matches_pure(self):
        """ The Wootters formula reduces to 2|a00 a11 - a01 a10| on pure states """
        rng = np.random.default_rng(20)
        for _ in range(200):
            state = random_state(rng, 2)
            self.assertAlmostEqual(concurrence_mixed(DensityMatrix.from_state(state)), concurrence_pure(state),
                                   delta=1e-9)

    def test_w_marginals(self):
        reduced = partial_trace(DensityMatrix.from_state(w_state()), 0)
        self.assertAlmostEqual(concurrence_mixed(reduced), 2 / 3, places=10)


class TestThreeTangle(TestCase):

    def test_ghz(self):
        self.assertAlmostEqual(three_tangle_pure(ghz_state()), 1.0, places=14)

    def test_w(self):
        self.assertAlmostEqual(three_tangle_pure(w_state()), 0.0, places=14)

    def test_grover_oracle_state(self):
        self.assertAlmostEqual(three_tangle_pure(grover_oracle_state()), 0.25, places=14)

    def test_product(self):
        self.assertAlmostEqual(three_tangle_pure(StateVector.from_label('+0-')), 0.0, places=14)

    def test_wrong_qubit_count(self):
        with self.assertRaises(DimensionError):
            three_tangle_pure(bell_state())

    def test_hyperdeterminant_stacks(self):
        """ A stack of states gives one hyperdeterminant per row """
        stack = np.stack([ghz_state().amplitudes, w_state().amplitudes])
        np.testing.assert_allclose(4 * np.abs(hyperdeterminant(stack)), [1, 0], atol=1e-14)

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            state = random_state(rng, 3)
            for qubit in range(3):
                rotated = apply(state, random_local_unitary(rng), [qubit])
                self.assertAlmostEqual(three_tangle_pure(rotated), three_tangle_pure(state), delta=1e-9)

    def test_range(self):
        rng = np.random.default_rng(22)
        for _ in range(50):
            value = three_tangle_pure(random_state(rng, 3))
            self.assertGreaterEqual(value, 0.0)
            self.assertLessEqual(value, 1.0 + 1e-12)


class TestNegativity(TestCase):

    def test_product(self):
        self.assertAlmostEqual(negativity(product_density('+', '1'), 0), 0.0, places=12)

    def test_bell(self):
        self.assertAlmostEqual(negativity(bell_density(), 0), 1.0, places=12)
        self.assertAlmostEqual(negativity(bell_density(), 1), 1.0, places=12)

    def test_ghz_cut(self):
        self.assertAlmostEqual(negativity(ghz_state(), 0), 1.0, places=12)

    def test_invalid_subsystem(self):
        with self.assertRaises(DimensionError):
            negativity(bell_density(), 2)


class TestPiTangle(TestCase):

    def test_ghz(self):
        self.assertAlmostEqual(pi_tangle(ghz_state()), 1.0, places=10)

    def test_w(self):
        """ pi(W) = 4/9 (sqrt(5) - 1), about 0.5494 """
        self.assertAlmostEqual(pi_tangle(w_state()), pi_tangle_w, places=9)

    def test_separable(self):
        self.assertAlmostEqual(pi_tangle(StateVector.basis(3, 0)), 0.0, places=12)

    def test_density_matrix_input(self):
        self.assertAlmostEqual(pi_tangle(DensityMatrix.from_state(ghz_state())), 1.0, places=10)

    def test_wrong_dimensions(self):
        with self.assertRaises(DimensionError):
            pi_tangle(bell_density())


class TestAnalyzeThreeQubit(TestCase):

    def test_grover_oracle_state(self):
        record = analyze_three_qubit(grover_oracle_state())
        self.assertEqual(record.source, 'pure')
        self.assertAlmostEqual(record.three_tangle, 0.25, places=12)
        for pair in ('AB', 'AC', 'BC'):
            self.assertAlmostEqual(record.pairwise_concurrences[pair], 0.5, places=9)

    def test_separable(self):
        record = analyze_three_qubit(StateVector.basis(3, 0)).clamped()
        self.assertEqual(record.three_tangle, 0.0)
        self.assertAlmostEqual(record.pi_tangle, 0.0, places=12)
        for value in record.pairwise_concurrences.values():
            self.assertAlmostEqual(value, 0.0, places=12)

    def test_rank_one_density(self):
        """ A rank-1 density matrix is analyzed as the pure state it projects onto """
        record = analyze_three_qubit(DensityMatrix.from_state(ghz_state()))
        self.assertEqual(record.source, 'pure')
        self.assertAlmostEqual(record.three_tangle, 1.0, places=9)

    def test_biseparable_mixture(self):
        rng = np.random.default_rng(23)
        rho = DensityMatrix(kron(np.diag([1.0, 0.0]), random_density(rng, 2).matrix))
        record = analyze_three_qubit(rho)
        self.assertEqual(record.source, 'biseparable')
        self.assertEqual(record.three_tangle, 0.0)

    def test_unknown_mixed_state(self):
        rng = np.random.default_rng(24)
        record = analyze_three_qubit(random_density(rng, 3))
        self.assertEqual(record.source, 'unavailable')
        self.assertIsNone(record.three_tangle)
        self.assertIsNotNone(record.pi_tangle)

    def test_monogamy(self):
        """ The negativity residuals stay non-negative on random states """
        rng = np.random.default_rng(25)
        for _ in range(10):
            residuals = analyze_three_qubit(random_state(rng, 3)).monogamy_residuals()
            self.assertEqual(sorted(residuals), ['A', 'B', 'C'])
            self.assertGreaterEqual(min(residuals.values()), -1e-9)

    def test_wrong_size(self):
        with self.assertRaises(DimensionError):
            analyze_three_qubit(bell_state())


class TestAnalyzeTwoQubit(TestCase):

    def test_bell(self):
        record = analyze_two_qubit(bell_state())
        self.assertAlmostEqual(record.pairwise_concurrences['AB'], 1.0, places=12)
        self.assertAlmostEqual(record.one_to_rest_negativities['A'], 1.0, places=12)
        self.assertIsNone(record.three_tangle)
        self.assertEqual(record.monogamy_residuals(), {})

    def test_mixed(self):
        record = analyze_two_qubit(DensityMatrix.maximally_mixed(2))
        self.assertEqual(record.pairwise_concurrences['AB'], 0.0)
        self.assertEqual(record.source, 'unavailable')


class TestEntanglementRecord(TestCase):

    def test_clamped(self):
        record = EntanglementRecord(three_tangle=-1e-12, pi_tangle=-1e-3, pairwise_concurrences={'AB': -5e-11})
        clamped = record.clamped()
        self.assertEqual(clamped.three_tangle, 0.0)
        self.assertEqual(clamped.pi_tangle, -1e-3)
        self.assertEqual(clamped.pairwise_concurrences['AB'], 0.0)
        self.assertIsNone(clamped.three_tangle_roof)

    def test_to_dict(self):
        record = analyze_three_qubit(ghz_state())
        values = record.to_dict()
        self.assertAlmostEqual(values['tau3'], 1.0, places=12)
        self.assertIn('C_AB', values)
        self.assertIn('N_A', values)
        self.assertIn('N_BC', values)
