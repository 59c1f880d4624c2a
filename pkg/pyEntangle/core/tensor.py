import logging
from functools import reduce

import numpy as np

from pyEntangle.internal.errors import ConvergenceError, DimensionError, HermitianError, ValidationError
from pyEntangle.internal.utils import (basis_index, check_hermitian, check_square, check_subsystems,
                                       num_qubits_for)

log = logging.getLogger('pyEntangle')
__all__ = ['StateVector', 'DensityMatrix', 'SpectralDecomposition', 'kron', 'kron_all', 'partial_trace',
           'partial_transpose', 'hermitian_eig', 'trace_norm', 'is_hermitian', 'is_unitary', 'is_psd', 'ghz_state',
           'w_state', 'bell_state', 'NORM_TOLERANCE', 'RANK_TOLERANCE', 'JACOBI_TOLERANCE', 'JACOBI_MAX_SWEEPS']

NORM_TOLERANCE = 1e-10
RANK_TOLERANCE = 1e-9
JACOBI_TOLERANCE = 1e-13
JACOBI_MAX_SWEEPS = 100

# Density matrices must be Hermitian and unit trace within this, and have no eigenvalue below -PSD_TOLERANCE
DENSITY_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-10

_LABEL_STATES = {
    '0': np.array([1, 0], dtype=complex),
    '1': np.array([0, 1], dtype=complex),
    '+': np.array([1, 1], dtype=complex) / np.sqrt(2),
    '-': np.array([1, -1], dtype=complex) / np.sqrt(2),
}


def kron(a, b):
    """ Kronecker product of two matrices or vectors; dimensions multiply. """
    return np.kron(a, b)


def kron_all(*matrices):
    """ Kronecker product of any number of matrices, left to right. """
    if not matrices:
        raise DimensionError('kron_all requires at least one matrix')
    return reduce(np.kron, matrices)


def is_hermitian(matrix, tol=1e-10):
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    return bool(np.max(np.abs(matrix - matrix.conj().T), initial=0.0) <= tol)


def is_unitary(matrix, tol=1e-10):
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    identity = np.eye(matrix.shape[0])
    return bool(np.max(np.abs(matrix @ matrix.conj().T - identity), initial=0.0) <= tol)


def is_psd(matrix, tol=1e-10):
    """ Whether ``matrix`` is Hermitian with no eigenvalue below ``-tol``. """
    if not is_hermitian(matrix, tol):
        return False
    return bool(hermitian_eig(matrix).eigenvalues[-1] >= -tol)


class SpectralDecomposition(object):
    """Eigenvalues and eigenvectors of a Hermitian matrix.

    Attributes:
        eigenvalues: Real eigenvalues in descending order
        eigenvectors: Matrix whose columns are the orthonormal eigenvectors, in the same order
        rank_tolerance: Eigenvalues above this count towards :attr:`rank`

    """
    def __init__(self, eigenvalues, eigenvectors, rank_tolerance=RANK_TOLERANCE):
        self.eigenvalues = np.asarray(eigenvalues, dtype=float)
        self.eigenvectors = np.asarray(eigenvectors, dtype=complex)
        self.rank_tolerance = rank_tolerance

    def __str__(self):
        return 'SpectralDecomposition({})'.format(np.array2string(self.eigenvalues, precision=6))

    def __repr__(self):
        return str(self)

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def rank(self):
        # type: () -> int
        return int(np.sum(self.eigenvalues > self.rank_tolerance))

    def eigenvector(self, index):
        return self.eigenvectors[:, index]

    def reconstruct(self):
        """ Returns V diag(eigenvalues) V^dagger. """
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def _fix_phase(vector):
    # First component within 1e-9 of the largest magnitude is made real and positive
    magnitudes = np.abs(vector)
    pivot = int(np.argmax(magnitudes >= magnitudes.max() - 1e-9))
    return vector * (abs(vector[pivot]) / vector[pivot])


def hermitian_eig(matrix, tol=JACOBI_TOLERANCE, max_sweeps=JACOBI_MAX_SWEEPS, rank_tolerance=RANK_TOLERANCE):
    """Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot element and then applies the real symmetric Jacobi rotation,
    so that the pivot pair becomes zero and the diagonal stays real. Sweeps continue until the Frobenius norm of the
    off-diagonal part is at most ``tol * max(1, ||H||_F)``.

    Eigenvalues are sorted descending and each eigenvector's phase is fixed by making its first largest component
    real and positive, so identical input always gives identical output.

    Args:
        matrix: A square Hermitian matrix
        tol: Relative convergence threshold for the off-diagonal norm
        max_sweeps: Maximum number of cyclic sweeps
        rank_tolerance: Passed on to the returned decomposition

    Returns:
        :class:`SpectralDecomposition <pyEntangle.core.tensor.SpectralDecomposition>`

    Raises:
        HermitianError: The matrix is not Hermitian within 1e-10
        ConvergenceError: The off-diagonal norm did not drop below the threshold within ``max_sweeps`` sweeps

    """
    check_hermitian(matrix, 1e-10)
    a = np.array(matrix, dtype=complex)
    size = a.shape[0]
    vectors = np.eye(size, dtype=complex)
    threshold = tol * max(1.0, np.linalg.norm(a))

    sweeps = 0
    while True:
        off_diagonal = np.linalg.norm(a - np.diag(np.diag(a)))
        if off_diagonal <= threshold:
            break
        if sweeps >= max_sweeps:
            log.warning('Jacobi eigensolver stopped after {} sweeps with off-diagonal norm {}'
                        .format(sweeps, off_diagonal))
            raise ConvergenceError('Eigensolver did not converge within {} sweeps'.format(max_sweeps))

        for p in range(size - 1):
            for q in range(p + 1, size):
                _rotate(a, vectors, p, q)
        sweeps += 1

    log.debug('Jacobi eigensolver converged after {} sweeps on a {}x{} matrix'.format(sweeps, size, size))

    eigenvalues = np.real(np.diag(a))
    order = np.argsort(-eigenvalues, kind='stable')
    eigenvectors = np.column_stack([_fix_phase(vectors[:, i]) for i in order]) if size else vectors

    return SpectralDecomposition(eigenvalues[order], eigenvectors, rank_tolerance)


def _rotate(a, vectors, p, q):
    pivot = a[p, q]
    magnitude = abs(pivot)
    if magnitude == 0.0:
        return

    eps = np.conj(pivot) / magnitude
    theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
    if theta == 0.0:
        t = 1.0
    else:
        t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c

    column_p, column_q = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * column_p - s * eps * column_q
    a[:, q] = s * column_p + c * eps * column_q

    row_p, row_q = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c * row_p - s * np.conj(eps) * row_q
    a[q, :] = s * row_p + c * np.conj(eps) * row_q

    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    vector_p, vector_q = vectors[:, p].copy(), vectors[:, q].copy()
    vectors[:, p] = c * vector_p - s * eps * vector_q
    vectors[:, q] = s * vector_p + c * eps * vector_q


def trace_norm(matrix):
    """ Tr sqrt(R R^dagger). Hermitian input is summed over absolute eigenvalues directly. """
    matrix = check_square(matrix)
    if is_hermitian(matrix):
        return float(np.sum(np.abs(hermitian_eig(matrix).eigenvalues)))
    eigenvalues = hermitian_eig(matrix @ matrix.conj().T).eigenvalues
    return float(np.sum(np.sqrt(np.clip(eigenvalues, 0.0, None))))


class StateVector(object):
    """A normalized pure state of ``num_qubits`` qubits.

    Amplitudes are indexed big-endian: qubit 0 is the most significant bit of the basis index. The amplitude array
    is read-only; every operation returns a new StateVector.

    Attributes:
        num_qubits: Number of qubits in the register
        amplitudes: Complex amplitudes of length ``2 ** num_qubits``

    """
    def __init__(self, amplitudes, tol=NORM_TOLERANCE):
        amplitudes = np.array(amplitudes, dtype=complex).ravel()
        self.num_qubits = num_qubits_for(amplitudes.size)  # type: int

        norm_squared = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm_squared - 1.0) > tol:
            raise ValidationError('State is not normalized: squared norm {}'.format(norm_squared))

        amplitudes.flags.writeable = False
        self.amplitudes = amplitudes

    def __str__(self):
        terms = ['({:.4g})|{}>'.format(amplitude, format(index, '0{}b'.format(self.num_qubits)))
                 for index, amplitude in enumerate(self.amplitudes) if abs(amplitude) > 1e-12]
        return ' + '.join(terms)

    def __repr__(self):
        return 'StateVector({})'.format(str(self))

    def __len__(self):
        return self.amplitudes.size

    def __getitem__(self, item):
        return self.amplitudes[item]

    @classmethod
    def basis(cls, num_qubits, index):
        # type: (int, int) -> StateVector
        dimension = 2 ** num_qubits
        if not 0 <= index < dimension:
            raise DimensionError('Basis index {} out of range for {} qubits'.format(index, num_qubits))
        amplitudes = np.zeros(dimension, dtype=complex)
        amplitudes[index] = 1.0
        return cls(amplitudes)

    @classmethod
    def uniform(cls, num_qubits):
        """ The equal superposition of every basis state. """
        dimension = 2 ** num_qubits
        return cls(np.full(dimension, 1.0 / np.sqrt(dimension), dtype=complex))

    @classmethod
    def from_label(cls, label):
        """ Product state from a label of ``0``, ``1``, ``+`` and ``-`` characters, qubit 0 first. """
        if not label or any(char not in _LABEL_STATES for char in label):
            raise ValidationError('Invalid state label: {!r}'.format(label))
        return cls(kron_all(*[_LABEL_STATES[char] for char in label]))

    @classmethod
    def normalized(cls, amplitudes):
        """ Builds a StateVector from amplitudes of any nonzero norm. """
        amplitudes = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(amplitudes)
        if norm == 0:
            raise ValidationError('Cannot normalize the zero vector')
        return cls(amplitudes / norm)

    @property
    def dimension(self):
        return self.amplitudes.size

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, bits):
        """ Amplitude of the basis state given as a bit string or sequence, qubit 0 first. """
        if len(bits) != self.num_qubits:
            raise DimensionError('Expected {} bits, received {!r}'.format(self.num_qubits, bits))
        return self.amplitudes[basis_index(bits)]

    def tensor(self, other):
        # type: (StateVector) -> StateVector
        return StateVector(np.kron(self.amplitudes, other.amplitudes))

    def inner(self, other):
        """ <self|other> """
        if other.dimension != self.dimension:
            raise DimensionError('Cannot take the inner product of states on {} and {} qubits'
                                 .format(self.num_qubits, other.num_qubits))
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def density_matrix(self):
        return DensityMatrix.from_state(self)

    def allclose(self, other, tol=1e-10):
        return bool(np.max(np.abs(self.amplitudes - np.asarray(other.amplitudes)), initial=0.0) <= tol)


class DensityMatrix(object):
    """A Hermitian, unit-trace, positive semidefinite matrix over a composite system.

    Attributes:
        matrix: The complex matrix, read-only
        subsystem_dims: Dimension of each subsystem, in the order used by the basis index

    """
    def __init__(self, matrix, subsystem_dims=None):
        matrix = np.array(check_square(matrix), dtype=complex)
        subsystem_dims = self._dims_for(matrix.shape[0], subsystem_dims)

        if not is_hermitian(matrix, DENSITY_TOLERANCE):
            raise HermitianError('Density matrix must be Hermitian')
        trace = np.trace(matrix).real
        if abs(trace - 1.0) > DENSITY_TOLERANCE:
            raise ValidationError('Density matrix must have unit trace, received {}'.format(trace))
        smallest = hermitian_eig(matrix).eigenvalues[-1]
        if smallest < -PSD_TOLERANCE:
            raise ValidationError('Density matrix has negative eigenvalue {}'.format(smallest))

        matrix.flags.writeable = False
        self.matrix = matrix
        self.subsystem_dims = subsystem_dims

    def __str__(self):
        return 'DensityMatrix(dims={})'.format(self.subsystem_dims)

    def __repr__(self):
        return str(self)

    @staticmethod
    def _dims_for(dimension, subsystem_dims):
        if subsystem_dims is None:
            return (2,) * num_qubits_for(dimension)
        subsystem_dims = tuple(int(d) for d in subsystem_dims)
        if int(np.prod(subsystem_dims)) != dimension:
            raise DimensionError('Subsystem dimensions {} do not match matrix dimension {}'
                                 .format(subsystem_dims, dimension))
        return subsystem_dims

    @classmethod
    def _from_trusted(cls, matrix, subsystem_dims):
        # Skips validation for matrices derived from an already valid state
        instance = cls.__new__(cls)
        matrix = np.array(matrix, dtype=complex)
        matrix.flags.writeable = False
        instance.matrix = matrix
        instance.subsystem_dims = tuple(subsystem_dims)
        return instance

    @classmethod
    def from_state(cls, state):
        # type: (StateVector) -> DensityMatrix
        """ The projector onto a pure state. """
        return cls._from_trusted(np.outer(state.amplitudes, state.amplitudes.conj()), (2,) * state.num_qubits)

    @classmethod
    def maximally_mixed(cls, num_qubits):
        dimension = 2 ** num_qubits
        return cls._from_trusted(np.eye(dimension) / dimension, (2,) * num_qubits)

    @property
    def dimension(self):
        return self.matrix.shape[0]

    @property
    def num_subsystems(self):
        return len(self.subsystem_dims)

    def purity(self):
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def spectrum(self, rank_tolerance=RANK_TOLERANCE):
        return hermitian_eig(self.matrix, rank_tolerance=rank_tolerance)


def partial_trace(rho, traced):
    """Traces out the given subsystems.

    Args:
        rho: A :class:`DensityMatrix <pyEntangle.core.tensor.DensityMatrix>`
        traced: Index or indices of the subsystems to remove

    Returns:
        The reduced DensityMatrix over the remaining subsystems, in their original order

    Raises:
        DimensionError: An index is out of range, or every subsystem would be traced out

    """
    traced = check_subsystems(traced, rho.num_subsystems)
    dims = rho.subsystem_dims
    remaining = len(dims)
    tensor = rho.matrix.reshape(dims + dims)

    for index in reversed(traced):
        tensor = np.trace(tensor, axis1=index, axis2=index + remaining)
        remaining -= 1

    kept = tuple(d for i, d in enumerate(dims) if i not in traced)
    size = int(np.prod(kept))
    return DensityMatrix._from_trusted(tensor.reshape(size, size), kept)


def partial_transpose(rho, subsystem):
    """ Transposes the indices of one subsystem. The result is Hermitian but need not be positive semidefinite. """
    (subsystem,) = check_subsystems(subsystem, rho.num_subsystems, allow_all=True)
    dims = rho.subsystem_dims
    count = len(dims)
    tensor = rho.matrix.reshape(dims + dims)
    tensor = np.swapaxes(tensor, subsystem, subsystem + count)
    return tensor.reshape(rho.dimension, rho.dimension)


def ghz_state(num_qubits=3):
    amplitudes = np.zeros(2 ** num_qubits, dtype=complex)
    amplitudes[0] = amplitudes[-1] = 1 / np.sqrt(2)
    return StateVector(amplitudes)


def w_state(num_qubits=3):
    amplitudes = np.zeros(2 ** num_qubits, dtype=complex)
    for qubit in range(num_qubits):
        amplitudes[1 << qubit] = 1 / np.sqrt(num_qubits)
    return StateVector(amplitudes)


def bell_state():
    """ (|00> + |11>)/sqrt(2) """
    return ghz_state(2)
