import numpy as np

from pyEntangle.internal.errors import DimensionError, HermitianError

# Values this close below zero are floating point noise and are reported as 0
CLAMP_TOLERANCE = 1e-10


def num_qubits_for(dimension):
    # type: (int) -> int
    """ Number of qubits spanning a space of the given dimension, which must be a power of two. """
    dimension = int(dimension)
    if dimension < 1 or dimension & (dimension - 1):
        raise DimensionError('Dimension {} is not a power of two'.format(dimension))
    return dimension.bit_length() - 1


def qubit_bit(index, qubit, num_qubits):
    # type: (int, int, int) -> int
    """ Value of one qubit inside a basis-state index.

    Qubit 0 is the most significant bit of the index (big-endian), so ``|01>`` on two qubits is index 1 with qubit 0
    in state 0 and qubit 1 in state 1. Every register layout in pyEntangle goes through this convention.

    >>> qubit_bit(1, 0, 2), qubit_bit(1, 1, 2)
    (0, 1)
    """
    return (index >> (num_qubits - 1 - qubit)) & 1


def basis_index(bits):
    """ Inverse of :func:`qubit_bit`: the basis-state index of a bit sequence given most significant qubit first. """
    index = 0
    for bit in bits:
        index = (index << 1) | int(bit)
    return index


def basis_label(index, num_qubits):
    # type: (int, int) -> str
    return format(index, '0{}b'.format(num_qubits)) if num_qubits else ''


def check_square(matrix):
    """ Raises a DimensionError unless ``matrix`` is a square 2-d array. """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError('Square matrix required, received shape {}'.format(matrix.shape))
    return matrix


def check_hermitian(matrix, tol=1e-10):
    """ Raises a HermitianError unless ``matrix`` equals its conjugate transpose within ``tol`` (max norm). """
    matrix = check_square(matrix)
    if matrix.size and np.max(np.abs(matrix - matrix.conj().T)) > tol:
        raise HermitianError()
    return matrix


def check_subsystems(indices, count, allow_all=False):
    """ Validates a collection of subsystem indices against a system with ``count`` subsystems.

    Args:
        indices: A single index or an iterable of indices
        count: Number of subsystems in the system
        allow_all: Whether selecting every subsystem is acceptable

    Returns:
        A sorted tuple of the distinct indices

    Raises:
        DimensionError: For out of range or repeated indices, or when every subsystem is selected and that is not
            allowed.
    """
    if np.ndim(indices) == 0:
        indices = [indices]
    indices = [int(index) for index in indices]

    if any(index < 0 or index >= count for index in indices):
        raise DimensionError('subsystem out of range: {} for a system of {} subsystems'.format(indices, count))
    if len(set(indices)) != len(indices):
        raise DimensionError('Repeated subsystem index in {}'.format(indices))
    if not allow_all and len(indices) == count:
        raise DimensionError('Cannot trace out every subsystem')

    return tuple(sorted(indices))


def check_targets(targets, num_qubits, arity):
    """ Validates the target qubits of a gate application; order is preserved since it fixes the gate's qubit
    ordering. """
    targets = [int(target) for target in targets]
    if len(targets) != arity:
        raise DimensionError('Gate acts on {} qubits but {} targets were given'.format(arity, len(targets)))
    if any(target < 0 or target >= num_qubits for target in targets):
        raise DimensionError('Target qubit out of range: {} for {} qubits'.format(targets, num_qubits))
    if len(set(targets)) != len(targets):
        raise DimensionError('Target qubits must be distinct, received {}'.format(targets))
    return targets


def align_global_phase(reference, candidate):
    """ Multiplies ``candidate`` by the global phase that maximizes ``|<reference|candidate>|``.

    Returns:
        A tuple of the aligned amplitudes and the max-norm distance between them and ``reference``.
    """
    reference = np.asarray(reference, dtype=complex)
    candidate = np.asarray(candidate, dtype=complex)
    overlap = np.vdot(candidate, reference)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    aligned = candidate * phase
    return aligned, float(np.max(np.abs(aligned - reference)))


def clamp(value, tol=CLAMP_TOLERANCE):
    """ Reports values in ``[-tol, 0)`` as exactly 0. Larger negative values are returned unchanged so genuine
    violations stay visible. """
    if value is None:
        return None
    value = float(value)
    if -tol <= value < 0:
        return 0.0
    return value
