from unittest import TestCase

import numpy as np

from pyEntangle.core.circuit import H, SWAP, X, Z, Circuit, Gate, apply, controlled, controlled_power, \
    hamiltonian_evolution, qft, qpe_circuit, ry, run
from pyEntangle.core.tensor import StateVector
from pyEntangle.internal.errors import DimensionError, ValidationError
from tests.utils import random_hermitian, random_state, u1, u2

A = np.array([[3, 1], [1, 3]]) / 2


class TestGate(TestCase):

    def test_non_unitary(self):
        with self.assertRaises(ValidationError):
            Gate([[1, 1], [0, 1]])

    def test_non_square(self):
        with self.assertRaises(DimensionError):
            Gate(np.ones((2, 4)))

    def test_arity(self):
        self.assertEqual(H.arity, 1)
        self.assertEqual(SWAP.arity, 2)
        self.assertEqual(controlled(SWAP).arity, 3)

    def test_inverse_label(self):
        gate = Gate(ry(0.4).matrix, 'R')
        self.assertEqual(gate.inverse().label, 'R†')
        self.assertEqual(gate.inverse().inverse().label, 'R')

    def test_power(self):
        np.testing.assert_allclose(X.power(2).matrix, np.eye(2))
        self.assertIs(X.power(1), X)

    def test_negative_power(self):
        with self.assertRaises(ValidationError):
            X.power(-1)

    def test_controlled_layout(self):
        """ The control is qubit 0, so the gate block sits in the lower right corner """
        matrix = controlled(X).matrix
        np.testing.assert_allclose(matrix[2:, 2:], X.matrix)
        np.testing.assert_allclose(matrix[:2, :2], np.eye(2))


class TestApply(TestCase):

    def test_hadamard_on_zero(self):
        result = apply(StateVector.basis(1, 0), H, [0])
        np.testing.assert_allclose(result.amplitudes, [1 / np.sqrt(2), 1 / np.sqrt(2)])

    def test_target_qubit_order(self):
        """ X on qubit 0 of |00> gives |10>, index 2 """
        result = apply(StateVector.basis(2, 0), X, 0)
        self.assertTrue(result.allclose(StateVector.basis(2, 2)))

    def test_targets_fix_gate_roles(self):
        """ CNOT controlled by qubit 2 flips qubit 0 of |001> """
        result = apply(StateVector.from_label('001'), controlled(X), [2, 0])
        self.assertTrue(result.allclose(StateVector.from_label('101')))

    def test_phase_oracle_flips_sign(self):
        oracle = Gate(np.diag([1, 1, 1, -1]), 'O')
        result = apply(StateVector.uniform(2), oracle, [0, 1])
        np.testing.assert_allclose(result.amplitudes, [0.5, 0.5, 0.5, -0.5])

    def test_apply_then_inverse(self):
        rng = np.random.default_rng(10)
        state = random_state(rng, 3)
        gate = hamiltonian_evolution(random_hermitian(rng, 4), 0.7)
        restored = apply(apply(state, gate, [2, 0]), gate.inverse(), [2, 0])
        self.assertTrue(restored.allclose(state))

    def test_norm_is_preserved(self):
        rng = np.random.default_rng(11)
        state = random_state(rng, 4)
        result = apply(state, hamiltonian_evolution(random_hermitian(rng, 4), 1.3), [3, 1])
        self.assertAlmostEqual(result.norm, 1.0, places=12)

    def test_wrong_arity(self):
        with self.assertRaises(DimensionError):
            apply(StateVector.basis(2, 0), SWAP, [0])

    def test_target_out_of_range(self):
        with self.assertRaises(DimensionError):
            apply(StateVector.basis(2, 0), H, [2])


class TestHamiltonianEvolution(TestCase):

    def test_eigenvectors_pick_up_phases(self):
        """ At t = 2 pi / 4, exp(iAt) sends u1 to i u1 and u2 to -u2 """
        gate = hamiltonian_evolution(A, 2 * np.pi / 4)
        np.testing.assert_allclose(gate.matrix @ u1, 1j * u1, atol=1e-12)
        np.testing.assert_allclose(gate.matrix @ u2, -u2, atol=1e-12)

    def test_zero_time(self):
        np.testing.assert_allclose(hamiltonian_evolution(A, 0).matrix, np.eye(2), atol=1e-14)

    def test_times_compose(self):
        first = hamiltonian_evolution(A, 0.3).matrix
        second = hamiltonian_evolution(A, 0.5).matrix
        np.testing.assert_allclose(first @ second, hamiltonian_evolution(A, 0.8).matrix, atol=1e-12)

    def test_pauli_z(self):
        gate = hamiltonian_evolution(Z.matrix, np.pi / 2)
        np.testing.assert_allclose(gate.matrix, np.diag([1j, -1j]), atol=1e-14)


class TestQft(TestCase):

    def test_single_qubit_is_hadamard(self):
        np.testing.assert_allclose(qft(1).unitary(), H.matrix, atol=1e-15)

    def test_discrete_fourier_matrix(self):
        """ F[k, x] = exp(2 pi i x k / N) / sqrt(N) on three qubits """
        size = 8
        k, x = np.meshgrid(np.arange(size), np.arange(size), indexing='ij')
        expected = np.exp(2j * np.pi * x * k / size) / np.sqrt(size)
        np.testing.assert_allclose(qft(3).unitary(), expected, atol=1e-12)

    def test_inverse_on_alternating_state(self):
        """ The inverse QFT sends (1, -1, 1, -1)/2 to |10> """
        state = StateVector(np.array([1, -1, 1, -1]) / 2)
        result = run(qft(2, inverse=True), state).final
        self.assertTrue(result.allclose(StateVector.from_label('10'), 1e-12))

    def test_inverse_undoes_forward(self):
        rng = np.random.default_rng(12)
        state = random_state(rng, 3)
        result = run(qft(3).compose(qft(3, inverse=True)), state).final
        self.assertTrue(result.allclose(state, 1e-12))

    def test_no_qubits(self):
        with self.assertRaises(ValidationError):
            qft(0)


class TestControlledPower(TestCase):

    def test_control_off(self):
        operation = controlled_power(X, 1, 0, [1])
        result = apply(StateVector.from_label('01'), operation.gate, operation.targets)
        self.assertTrue(result.allclose(StateVector.from_label('01')))

    def test_control_on(self):
        operation = controlled_power(X, 3, 0, [1])
        result = apply(StateVector.from_label('10'), operation.gate, operation.targets)
        self.assertTrue(result.allclose(StateVector.from_label('11')))

    def test_even_power(self):
        operation = controlled_power(X, 2, 1, [0])
        result = apply(StateVector.from_label('01'), operation.gate, operation.targets)
        self.assertTrue(result.allclose(StateVector.from_label('01')))

    def test_control_inside_targets(self):
        with self.assertRaises(DimensionError):
            controlled_power(SWAP, 1, 1, [0, 1])


class TestQpe(TestCase):

    def test_eigenvalue_one(self):
        """ u1 has eigenvalue 1 and lands on clock state |01> """
        initial = StateVector(np.kron([1, 0, 0, 0], u1))
        final = run(qpe_circuit(A, 2 * np.pi / 4, 2), initial).final
        self.assertTrue(final.allclose(StateVector(np.kron([0, 1, 0, 0], u1)), 1e-12))

    def test_eigenvalue_two(self):
        initial = StateVector(np.kron([1, 0, 0, 0], u2))
        final = run(qpe_circuit(A, 2 * np.pi / 4, 2), initial).final
        self.assertTrue(final.allclose(StateVector(np.kron([0, 0, 1, 0], u2)), 1e-12))

    def test_register_size_mismatch(self):
        with self.assertRaises(DimensionError):
            qpe_circuit(A, 1.0, 2, system_qubits=2)


class TestCircuit(TestCase):

    def test_immutable_builders(self):
        empty = Circuit(2)
        built = empty.add(H, 0)
        self.assertEqual(len(empty), 0)
        self.assertEqual(len(built), 1)

    def test_invalid_targets_rejected_on_add(self):
        with self.assertRaises(DimensionError):
            Circuit(2).add(H, [3])

    def test_empty_circuit(self):
        state = StateVector.from_label('+0')
        trace = run(Circuit(2), state)
        self.assertEqual(trace.labels, ['initial'])
        self.assertTrue(trace.final.allclose(state))

    def test_snapshots(self):
        """ Snapshots record the state reached at their position in the circuit """
        circuit = Circuit(1).snapshot('before').add(X, 0).snapshot('after', 'flipped')
        trace = run(circuit, StateVector.basis(1, 0))
        self.assertEqual(trace.labels, ['initial', 'before', 'after'])
        self.assertTrue(trace['before'].state.allclose(StateVector.basis(1, 0)))
        self.assertTrue(trace['after'].state.allclose(StateVector.basis(1, 1)))
        self.assertEqual(trace['after'].description, 'flipped')

    def test_missing_stage(self):
        trace = run(Circuit(1), StateVector.basis(1, 0))
        with self.assertRaises(KeyError):
            trace['psi1']

    def test_initial_state_size(self):
        with self.assertRaises(DimensionError):
            run(Circuit(2), StateVector.basis(1, 0))

    def test_inverse_drops_snapshots(self):
        circuit = Circuit(1).add(H, 0).snapshot('s').add(ry(0.3), 0)
        inverse = circuit.inverse()
        self.assertEqual(inverse.snapshot_labels, [])
        np.testing.assert_allclose(inverse.unitary() @ circuit.unitary(), np.eye(2), atol=1e-14)

    def test_compose_maps_qubits(self):
        inner = Circuit(1).add(X, 0)
        circuit = Circuit(3).compose(inner, [2])
        self.assertEqual(circuit.operations[0].targets, (2,))

    def test_compose_size_mismatch(self):
        with self.assertRaises(DimensionError):
            Circuit(3).compose(Circuit(2), [0])
