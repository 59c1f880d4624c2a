import logging

import numpy as np
import pandas as pd

from pyEntangle.core.circuit import Circuit, Gate, H, run
from pyEntangle.core.entanglement import analyze_three_qubit, analyze_two_qubit
from pyEntangle.core.tensor import StateVector
from pyEntangle.internal.errors import ValidationError
from pyEntangle.internal.utils import clamp

log = logging.getLogger('pyEntangle')
__all__ = ['GroverRun', 'grover_circuit', 'grover_run', 'grover_table', 'optimal_iterations',
           'theoretical_success_probability', 'oracle_gate', 'diffuser_gate', 'MAX_QUBITS', 'TABLE_COLUMNS']

MAX_QUBITS = 6
TABLE_COLUMNS = ['state', 'tau3', 'C_AB', 'C_AC', 'C_BC']


def _check_problem(num_qubits, target, iterations):
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValidationError('Grover search supports 1 to {} qubits, received {}'.format(MAX_QUBITS, num_qubits))
    if not 0 <= target < 2 ** num_qubits:
        raise ValidationError('Target {} out of range for {} qubits'.format(target, num_qubits))
    if iterations is not None and iterations < 0:
        raise ValidationError('Iterations must be non-negative, received {}'.format(iterations))


def optimal_iterations(num_qubits):
    # type: (int) -> int
    """ floor(pi sqrt(N) / 4) """
    return int(np.floor(np.pi * np.sqrt(2 ** num_qubits) / 4))


def theoretical_success_probability(num_qubits, iterations):
    """ sin^2((2k + 1) theta) with sin(theta) = 1/sqrt(N). """
    theta = np.arcsin(1 / np.sqrt(2 ** num_qubits))
    return float(np.sin((2 * iterations + 1) * theta) ** 2)


def oracle_gate(num_qubits, target):
    """ 1 - 2|target><target|: flips the sign of the marked basis state. """
    matrix = np.eye(2 ** num_qubits, dtype=complex)
    matrix[target, target] = -1
    return Gate(matrix, 'Oracle')


def diffuser_gate(num_qubits):
    """ 2|s><s| - 1, inversion about the mean. """
    dimension = 2 ** num_qubits
    return Gate(np.full((dimension, dimension), 2.0 / dimension) - np.eye(dimension), 'Diffuser')


def grover_circuit(num_qubits, target, iterations=None):
    """Superposition followed by ``iterations`` oracle/diffuser rounds.

    Snapshots are ``s`` after the Hadamards, then ``psi1, psi2, ...`` alternating between post-oracle and
    post-diffuser states.
    """
    if iterations is None:
        iterations = optimal_iterations(num_qubits)
    _check_problem(num_qubits, target, iterations)

    circuit = Circuit(num_qubits)
    for qubit in range(num_qubits):
        circuit = circuit.add(H, [qubit])
    circuit = circuit.snapshot('s', 'uniform superposition')

    oracle, diffuser = oracle_gate(num_qubits, target), diffuser_gate(num_qubits)
    qubits = list(range(num_qubits))
    for iteration in range(1, iterations + 1):
        circuit = circuit.add(oracle, qubits).snapshot('psi{}'.format(2 * iteration - 1), 'post-oracle')
        circuit = circuit.add(diffuser, qubits).snapshot('psi{}'.format(2 * iteration), 'post-diffuser')
    return circuit


class GroverRun(object):
    """One simulated Grover search.

    Attributes:
        num_qubits: Register size n, searching N = 2 ** n items
        target: Marked basis index
        iterations: Number of oracle/diffuser rounds
        trace: :class:`StageTrace <pyEntangle.core.circuit.StageTrace>`; on two and three qubits every stage carries
            an :class:`EntanglementRecord <pyEntangle.core.entanglement.EntanglementRecord>`

    """
    def __init__(self, num_qubits, target, iterations, trace):
        self.num_qubits = num_qubits
        self.target = target
        self.iterations = iterations
        self.trace = trace

    def __str__(self):
        return 'GroverRun(n={}, target={}, iterations={}, success={:.6f})'.format(
            self.num_qubits, self.target, self.iterations, self.success_probability)

    def __repr__(self):
        return str(self)

    @property
    def final(self):
        return self.trace.final

    @property
    def success_probability(self):
        return float(abs(self.final.amplitudes[self.target]) ** 2)


def grover_run(num_qubits, target, iterations=None):
    """Runs Grover's search from |0...0> and records entanglement at every stage.

    Args:
        num_qubits: Register size, 1 to 6
        target: Marked basis index
        iterations: Oracle/diffuser rounds; defaults to :func:`optimal_iterations`

    Returns:
        :class:`GroverRun`

    Raises:
        ValidationError: Register size, target or iteration count out of range

    """
    if iterations is None:
        iterations = optimal_iterations(num_qubits)
    circuit = grover_circuit(num_qubits, target, iterations)
    trace = run(circuit, StateVector.basis(num_qubits, 0))

    analyze = {2: analyze_two_qubit, 3: analyze_three_qubit}.get(num_qubits)
    if analyze is not None:
        for stage in trace:
            stage.record = analyze(stage.state)

    result = GroverRun(num_qubits, target, iterations, trace)
    log.debug('{} finished'.format(result))
    return result


def grover_table(num_qubits=3, target=7, iterations=None):
    """Three-tangle and pairwise concurrences of every post-oracle and post-diffuser state.

    Args:
        num_qubits: Must be 3, since the table carries a three-tangle column
        target: Marked basis index
        iterations: Oracle/diffuser rounds; with 0 the single row is the uniform superposition ``s``

    Returns:
        A pandas DataFrame with columns ``state, tau3, C_AB, C_AC, C_BC``

    """
    if num_qubits != 3:
        raise ValidationError('The Grover table needs 3 qubits, received {}'.format(num_qubits))
    result = grover_run(num_qubits, target, iterations)

    stages = [stage for stage in result.trace if stage.label.startswith('psi')]
    if not stages:
        stages = [result.trace['s']]

    rows = []
    for stage in stages:
        record = stage.record
        rows.append([stage.label, clamp(record.three_tangle)] +
                    [clamp(record.pairwise_concurrences[pair]) for pair in ('AB', 'AC', 'BC')])
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)
