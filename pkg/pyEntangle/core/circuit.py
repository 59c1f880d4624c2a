import logging
from collections import namedtuple

import numpy as np

from pyEntangle.core.tensor import StateVector, hermitian_eig, is_unitary
from pyEntangle.internal.errors import DimensionError, ValidationError
from pyEntangle.internal.utils import check_targets, num_qubits_for

log = logging.getLogger('pyEntangle')
__all__ = ['Gate', 'Circuit', 'Operation', 'Snapshot', 'Stage', 'StageTrace', 'apply', 'run', 'hamiltonian_evolution',
           'qft', 'controlled_power', 'qpe_circuit', 'controlled', 'phase', 'ry', 'I', 'H', 'X', 'Y', 'Z', 'SWAP']


class Gate(object):
    """A unitary acting on ``arity`` qubits.

    Attributes:
        matrix: The unitary matrix, of dimension ``2 ** arity``
        arity: Number of qubits the gate acts on
        label: A short name used in logs and circuit listings

    """
    def __init__(self, matrix, label='U', tol=1e-10):
        matrix = np.array(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError('Gate matrix must be square, received shape {}'.format(matrix.shape))
        self.arity = num_qubits_for(matrix.shape[0])  # type: int
        if self.arity == 0:
            raise DimensionError('A gate must act on at least one qubit')
        if not is_unitary(matrix, tol):
            raise ValidationError('Gate {} is not unitary'.format(label))

        matrix.flags.writeable = False
        self.matrix = matrix
        self.label = label  # type: str

    def __str__(self):
        return self.label

    def __repr__(self):
        return 'Gate({}, arity={})'.format(self.label, self.arity)

    def inverse(self):
        # type: () -> Gate
        label = self.label[:-1] if self.label.endswith('†') else self.label + '†'
        return Gate(self.matrix.conj().T, label)

    def power(self, exponent):
        # type: (int) -> Gate
        if exponent < 0:
            raise ValidationError('Gate powers must be non-negative, received {}'.format(exponent))
        if exponent == 1:
            return self
        return Gate(np.linalg.matrix_power(self.matrix, int(exponent)), '{}^{}'.format(self.label, exponent))


def controlled(gate, label=None):
    """ The gate controlled by one extra qubit, which becomes qubit 0 of the returned gate. """
    dimension = gate.matrix.shape[0]
    matrix = np.eye(2 * dimension, dtype=complex)
    matrix[dimension:, dimension:] = gate.matrix
    return Gate(matrix, label or 'C-' + gate.label)


def phase(angle):
    return Gate(np.diag([1.0, np.exp(1j * angle)]), 'P({:.6g})'.format(angle))


def ry(angle):
    """ Rotation about the y axis, [[cos a/2, -sin a/2], [sin a/2, cos a/2]]. """
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return Gate([[c, -s], [s, c]], 'Ry({:.6g})'.format(angle))


I = Gate(np.eye(2), 'I')
H = Gate(np.array([[1, 1], [1, -1]]) / np.sqrt(2), 'H')
X = Gate([[0, 1], [1, 0]], 'X')
Y = Gate([[0, -1j], [1j, 0]], 'Y')
Z = Gate([[1, 0], [0, -1]], 'Z')
SWAP = Gate([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], 'SWAP')

Operation = namedtuple('Operation', ['gate', 'targets'])
Snapshot = namedtuple('Snapshot', ['label', 'description'])


class Circuit(object):
    """An immutable sequence of gate operations and named snapshot markers on ``num_qubits`` qubits.

    Building methods return a new Circuit, so partially built circuits can be shared freely.

    Attributes:
        num_qubits: Register size
        steps: Tuple of :class:`Operation` and :class:`Snapshot` entries in execution order

    """
    def __init__(self, num_qubits, steps=()):
        if num_qubits < 1:
            raise DimensionError('A circuit needs at least one qubit')
        self.num_qubits = num_qubits  # type: int
        validated = []
        for step in steps:
            if isinstance(step, Operation):
                targets = tuple(check_targets(step.targets, num_qubits, step.gate.arity))
                step = Operation(step.gate, targets)
            validated.append(step)
        self.steps = tuple(validated)

    def __str__(self):
        parts = []
        for step in self.steps:
            if isinstance(step, Snapshot):
                parts.append('[{}]'.format(step.label))
            else:
                parts.append('{}{}'.format(step.gate.label, list(step.targets)))
        return 'Circuit({} qubits: {})'.format(self.num_qubits, ' '.join(parts))

    def __repr__(self):
        return str(self)

    def __len__(self):
        return len(self.steps)

    @property
    def operations(self):
        return [step for step in self.steps if isinstance(step, Operation)]

    @property
    def snapshot_labels(self):
        return [step.label for step in self.steps if isinstance(step, Snapshot)]

    def add(self, gate, targets):
        # type: (Gate, list) -> Circuit
        if np.ndim(targets) == 0:
            targets = [targets]
        return Circuit(self.num_qubits, self.steps + (Operation(gate, tuple(targets)),))

    def extend(self, operations):
        return Circuit(self.num_qubits, self.steps + tuple(operations))

    def snapshot(self, label, description=''):
        return Circuit(self.num_qubits, self.steps + (Snapshot(label, description),))

    def compose(self, other, qubits=None):
        """Appends another circuit, mapping its qubit ``i`` onto ``qubits[i]`` of this one.

        Args:
            other: The circuit to append
            qubits: Qubits of this circuit that host ``other``; defaults to the first ``other.num_qubits``

        Returns:
            A new Circuit; snapshots of ``other`` are kept

        """
        if qubits is None:
            qubits = list(range(other.num_qubits))
        qubits = list(qubits)
        if len(qubits) != other.num_qubits:
            raise DimensionError('Cannot place a {}-qubit circuit on {} qubits'.format(other.num_qubits, len(qubits)))

        steps = []
        for step in other.steps:
            if isinstance(step, Operation):
                step = Operation(step.gate, tuple(qubits[target] for target in step.targets))
            steps.append(step)
        return Circuit(self.num_qubits, self.steps + tuple(steps))

    def inverse(self):
        """ Reversed operations with adjoint gates; snapshots are dropped. """
        steps = [Operation(step.gate.inverse(), step.targets) for step in reversed(self.steps)
                 if isinstance(step, Operation)]
        return Circuit(self.num_qubits, steps)

    def unitary(self):
        """ The full matrix of the circuit, built column by column from basis states. """
        dimension = 2 ** self.num_qubits
        columns = []
        for index in range(dimension):
            state = StateVector.basis(self.num_qubits, index)
            for operation in self.operations:
                state = apply(state, operation.gate, operation.targets)
            columns.append(state.amplitudes)
        return np.column_stack(columns)


def apply(state, gate, targets):
    """Applies a gate on the target qubits, identity elsewhere.

    The order of ``targets`` fixes which qubit plays which role in the gate: ``targets[0]`` is the gate's most
    significant qubit.

    Args:
        state: :class:`StateVector <pyEntangle.core.tensor.StateVector>`
        gate: :class:`Gate`
        targets: Qubit indices, one per gate qubit

    Returns:
        A new StateVector

    Raises:
        DimensionError: The targets do not match the gate's arity or the register

    """
    if np.ndim(targets) == 0:
        targets = [targets]
    targets = check_targets(targets, state.num_qubits, gate.arity)
    arity = len(targets)
    front = list(range(arity))

    tensor = state.amplitudes.reshape((2,) * state.num_qubits)
    tensor = np.moveaxis(tensor, targets, front)
    shape = tensor.shape
    tensor = (gate.matrix @ tensor.reshape(2 ** arity, -1)).reshape(shape)
    tensor = np.moveaxis(tensor, front, targets)

    return StateVector(tensor.reshape(-1))


def hamiltonian_evolution(matrix, time):
    """ The gate e^{iAt} built from the exact eigendecomposition of the Hermitian matrix A. """
    decomposition = hermitian_eig(matrix)
    vectors = decomposition.eigenvectors
    unitary = (vectors * np.exp(1j * decomposition.eigenvalues * time)) @ vectors.conj().T
    return Gate(unitary, 'exp(iAt)')


def qft(num_qubits, inverse=False):
    """Quantum Fourier transform F|x> = sum_k exp(2 pi i x k / N)|k> / sqrt(N) under the big-endian convention.

    Hadamards and controlled phases are followed by the swaps that reverse qubit order. A single qubit gives a
    single Hadamard.

    Raises:
        ValidationError: ``num_qubits`` is below 1

    """
    if num_qubits < 1:
        raise ValidationError('QFT needs at least one qubit, received {}'.format(num_qubits))

    circuit = Circuit(num_qubits)
    for j in range(num_qubits):
        circuit = circuit.add(H, [j])
        for m in range(j + 1, num_qubits):
            angle = 2 * np.pi / 2 ** (m - j + 1)
            circuit = circuit.add(controlled(phase(angle)), [m, j])
    for j in range(num_qubits // 2):
        circuit = circuit.add(SWAP, [j, num_qubits - 1 - j])

    return circuit.inverse() if inverse else circuit


def controlled_power(gate, power, control, targets):
    """ An operation applying ``gate ** power`` on ``targets`` iff ``control`` is 1. """
    targets = list(targets)
    if control in targets:
        raise DimensionError('Control qubit {} is also a target'.format(control))
    return Operation(controlled(gate.power(power)), tuple([control] + targets))


def qpe_circuit(matrix, time, clock_bits, system_qubits=None):
    """Phase estimation of e^{iAt} with the clock register first.

    Clock qubit ``j`` controls ``U ** 2 ** (clock_bits - 1 - j)`` so that the clock holds the phase big-endian after
    the inverse QFT. With ``t = 2 pi / 2 ** clock_bits`` an integer eigenvalue ``k`` of A lands on clock state ``|k>``.

    Args:
        matrix: Hermitian matrix A
        time: Evolution time t
        clock_bits: Size of the clock register
        system_qubits: Size of the system register; inferred from A when omitted

    Returns:
        A Circuit on ``clock_bits + system_qubits`` qubits

    """
    if clock_bits < 1:
        raise ValidationError('QPE needs at least one clock qubit')
    unitary = hamiltonian_evolution(matrix, time)
    if system_qubits is None:
        system_qubits = unitary.arity
    if system_qubits != unitary.arity:
        raise DimensionError('Matrix acts on {} qubits, not {}'.format(unitary.arity, system_qubits))

    system = list(range(clock_bits, clock_bits + system_qubits))
    circuit = Circuit(clock_bits + system_qubits)
    for j in range(clock_bits):
        circuit = circuit.add(H, [j])
    for j in range(clock_bits):
        circuit = circuit.extend([controlled_power(unitary, 2 ** (clock_bits - 1 - j), j, system)])
    return circuit.compose(qft(clock_bits, inverse=True), range(clock_bits))


class Stage(object):
    """ A named state recorded while running a circuit, with an optional entanglement record attached later. """
    def __init__(self, label, state, description='', record=None):
        self.label = label  # type: str
        self.state = state  # type: StateVector
        self.description = description
        self.record = record

    def __str__(self):
        return self.label

    def __repr__(self):
        return 'Stage({})'.format(self.label)


class StageTrace(object):
    """Ordered stages of one circuit run. The first stage is always the initial state.

    Attributes:
        stages: List of :class:`Stage`
        final: The state after the last operation

    """
    def __init__(self, stages, final):
        self.stages = list(stages)
        self.final = final  # type: StateVector

    def __len__(self):
        return len(self.stages)

    def __iter__(self):
        return iter(self.stages)

    def __getitem__(self, item):
        if isinstance(item, str):
            for stage in self.stages:
                if stage.label == item:
                    return stage
            raise KeyError(item)
        return self.stages[item]

    def __repr__(self):
        return 'StageTrace({})'.format([stage.label for stage in self.stages])

    @property
    def labels(self):
        return [stage.label for stage in self.stages]


def run(circuit, initial):
    """Executes a circuit, recording the state at every snapshot marker.

    Raises:
        DimensionError: The initial state does not match the circuit's register

    """
    if initial.num_qubits != circuit.num_qubits:
        raise DimensionError('Circuit acts on {} qubits but the initial state has {}'
                             .format(circuit.num_qubits, initial.num_qubits))

    state = initial
    stages = [Stage('initial', initial, 'input state')]
    for step in circuit.steps:
        if isinstance(step, Snapshot):
            log.debug('Snapshot {} recorded after {} stages'.format(step.label, len(stages)))
            stages.append(Stage(step.label, state, step.description))
        else:
            state = apply(state, step.gate, step.targets)
    return StageTrace(stages, state)
