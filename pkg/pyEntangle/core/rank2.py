import logging

import numpy as np
from scipy.optimize import minimize

from pyEntangle.core.entanglement import hyperdeterminant
from pyEntangle.core.tensor import DensityMatrix, StateVector, hermitian_eig
from pyEntangle.internal.errors import DimensionError, ValidationError

log = logging.getLogger('pyEntangle')
__all__ = ['Rank2Family', 'DecompositionResult', 'rank2_characteristic', 'rank2_f', 'rank2_p_bounds',
           'rank2_three_tangle', 'rank2_convex_roof', 'match_rank2_family', 'decomposition_search', 'support_basis']

# Orthonormal support of the family: (|010> - |011>)/sqrt(2) and (|100> + |101>)/sqrt(2)
_PHI_A = np.array([0, 0, 1, -1, 0, 0, 0, 0], dtype=complex) / np.sqrt(2)
_PHI_B = np.array([0, 0, 0, 0, 1, 1, 0, 0], dtype=complex) / np.sqrt(2)

_FAMILY_TOLERANCE = 1e-10
# |x1^2 - x2^2| at or below this is the symmetric family, where p- = p+
_SYMMETRIC_TOLERANCE = 1e-12


def support_basis():
    """ The two orthonormal support vectors as the columns of an 8x2 matrix. """
    return np.column_stack([_PHI_A, _PHI_B])


class Rank2Family(object):
    """The mixture ``p |phi1><phi1| + (1 - p) |phi2><phi2|`` with

    ``|phi1> = x1 |phi_a> + x2 |phi_b>`` and ``|phi2> = -x2 |phi_a> + x1 |phi_b>``, where
    ``|phi_a> = (|010> - |011>)/sqrt(2)`` and ``|phi_b> = (|100> + |101>)/sqrt(2)``.

    Attributes:
        x1: Amplitude in [0, 1]
        x2: sqrt(1 - x1^2), unless given explicitly
        p: Mixing weight in [0, 1]

    """
    def __init__(self, x1, p, x2=None):
        x1, p = float(x1), float(p)
        if not 0.0 <= x1 <= 1.0:
            raise ValidationError('x1 must lie in [0, 1], received {}'.format(x1))
        if not 0.0 <= p <= 1.0:
            raise ValidationError('p must lie in [0, 1], received {}'.format(p))
        if x2 is None:
            x2 = np.sqrt(max(0.0, 1.0 - x1 * x1))
        x2 = float(x2)
        if x2 < 0.0 or abs(x1 * x1 + x2 * x2 - 1.0) > _FAMILY_TOLERANCE:
            raise ValidationError('x1^2 + x2^2 must equal 1 with x2 >= 0, received x1={}, x2={}'.format(x1, x2))

        self.x1 = x1  # type: float
        self.x2 = x2  # type: float
        self.p = p  # type: float

    def __str__(self):
        return 'Rank2Family(x1={:.6g}, x2={:.6g}, p={:.6g})'.format(self.x1, self.x2, self.p)

    def __repr__(self):
        return str(self)

    def with_p(self, p):
        return Rank2Family(self.x1, p, self.x2)

    def phi1(self):
        return StateVector(self.x1 * _PHI_A + self.x2 * _PHI_B)

    def phi2(self):
        return StateVector(-self.x2 * _PHI_A + self.x1 * _PHI_B)

    def z_state(self, theta):
        """ sqrt(p)|phi1> - e^{i theta} sqrt(1 - p)|phi2>, a unit vector since phi1 and phi2 are orthogonal. """
        amplitudes = (np.sqrt(self.p) * self.phi1().amplitudes -
                      np.exp(1j * theta) * np.sqrt(1 - self.p) * self.phi2().amplitudes)
        return StateVector(amplitudes)

    def density(self):
        phi1, phi2 = self.phi1().amplitudes, self.phi2().amplitudes
        matrix = self.p * np.outer(phi1, phi1.conj()) + (1 - self.p) * np.outer(phi2, phi2.conj())
        return DensityMatrix(matrix)


def rank2_characteristic(family, theta):
    """16 |y1 y2|^2, the three-tangle of Z(p, theta) in closed form.

    Args:
        family: :class:`Rank2Family`
        theta: Relative phase, scalar or array

    Returns:
        A float, or an array shaped like ``theta``

    """
    p, x1, x2 = family.p, family.x1, family.x2
    phase = np.exp(1j * np.asarray(theta, dtype=float))
    y1 = (np.sqrt(p) * x1 + phase * np.sqrt(1 - p) * x2) / np.sqrt(2)
    y2 = (np.sqrt(p) * x2 - phase * np.sqrt(1 - p) * x1) / np.sqrt(2)
    value = 16 * np.abs(y1 * y2) ** 2
    return float(value) if np.ndim(value) == 0 else value


def rank2_f(family):
    """ min of the characteristic curve over the theta = 0 and theta = pi branches. """
    return min(rank2_characteristic(family, 0.0), rank2_characteristic(family, np.pi))


def rank2_p_bounds(family):
    """ (p-, p+) = (1 -/+ |x1^2 - x2^2|) / 2, the zeros of :func:`rank2_f`. They coincide at 1/2 when x1 = x2. """
    gap = abs(family.x1 ** 2 - family.x2 ** 2)
    if gap <= _SYMMETRIC_TOLERANCE:
        return 0.5, 0.5
    return 0.5 * (1 - gap), 0.5 * (1 + gap)


def rank2_three_tangle(family):
    """The convex hull of :func:`rank2_f`: zero between p- and p+, f(p) outside.

    This is a lower bound on the convex roof; :func:`rank2_convex_roof` gives the exact value.
    """
    p_minus, p_plus = rank2_p_bounds(family)
    if p_minus <= family.p <= p_plus:
        return 0.0
    return rank2_f(family)


def rank2_convex_roof(family):
    """Exact convex-roof three-tangle 4 (2p - 1)^2 x1^2 x2^2.

    Every pure state in the support is ``u|phi_a> + v|phi_b>`` with tangle ``4|u|^2|v|^2``. On the Bloch sphere of
    that support this is ``1 - n_z^2``, whose convex roof is the squared transverse Bloch radius ``4|rho_ab|^2``. The
    two-element decomposition at fixed transverse radius attains it.
    """
    return 4 * (2 * family.p - 1) ** 2 * family.x1 ** 2 * family.x2 ** 2


def match_rank2_family(rho, tol=1e-9):
    """Recognizes a three-qubit density matrix supported on ``span(|phi_a>, |phi_b>)``.

    A complex or negative coupling between the two support vectors is removed by a local phase on qubit A, which
    leaves every tangle unchanged, so the returned family has x1, x2 >= 0 and p >= 1/2.

    Args:
        rho: A three-qubit :class:`DensityMatrix <pyEntangle.core.tensor.DensityMatrix>`
        tol: Largest allowed max-norm weight outside the support

    Returns:
        :class:`Rank2Family`, or None when ``rho`` lives outside the support

    """
    if rho.subsystem_dims != (2, 2, 2):
        raise DimensionError('The rank-2 family lives on three qubits, received dims {}'.format(rho.subsystem_dims))

    basis = support_basis()
    block = basis.conj().T @ rho.matrix @ basis
    if np.max(np.abs(rho.matrix - basis @ block @ basis.conj().T)) > tol:
        return None

    real_block = np.array([[block[0, 0].real, abs(block[0, 1])],
                           [abs(block[0, 1]), block[1, 1].real]])
    spectrum = hermitian_eig(real_block)
    top = np.abs(spectrum.eigenvector(0))
    x1 = float(np.clip(top[0], 0.0, 1.0))
    p = float(np.clip(spectrum.eigenvalues[0], 0.0, 1.0))
    return Rank2Family(x1, p, float(np.sqrt(max(0.0, 1.0 - x1 * x1))))


class DecompositionResult(object):
    """Best ensemble found by :func:`decomposition_search`.

    Attributes:
        value: Average three-tangle of the ensemble, an upper bound on the convex roof
        size: Number of ensemble elements
        weights: Probability of each element
        states: The normalized elements as StateVectors (zero-weight elements omitted)

    """
    def __init__(self, value, size, weights, states):
        self.value = float(value)
        self.size = size
        self.weights = list(weights)
        self.states = list(states)

    def __str__(self):
        return 'DecompositionResult(value={:.6g}, size={})'.format(self.value, self.size)

    def __repr__(self):
        return str(self)


def _scaled_eigenvectors(family):
    phi1, phi2 = family.phi1().amplitudes, family.phi2().amplitudes
    return np.sqrt(family.p) * phi1, np.sqrt(1 - family.p) * phi2


def _ensemble_tangle(mixing, first, second):
    """Average tangle of the ensemble ``sum_j mixing[..., i, j] e_j`` over rows ``i``.

    ``mixing`` has shape (..., m, 2); element vectors are unnormalized and contribute 4|Det|/||v||^2.
    """
    vectors = mixing[..., 0, None] * first + mixing[..., 1, None] * second
    norms = np.sum(np.abs(vectors) ** 2, axis=-1)
    determinants = np.abs(hyperdeterminant(vectors))
    safe = np.where(norms > 1e-300, norms, 1.0)
    contributions = np.where(norms > 1e-300, 4 * determinants / safe, 0.0)
    return np.sum(contributions, axis=-1)


def _two_element_mixing(a, phi):
    a, phi = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(phi, dtype=float))
    c, s, e = np.cos(a), np.sin(a), np.exp(1j * phi)
    mixing = np.empty(a.shape + (2, 2), dtype=complex)
    mixing[..., 0, 0], mixing[..., 0, 1] = c, -e * s
    mixing[..., 1, 0], mixing[..., 1, 1] = s, e * c
    return mixing


def _search_two(first, second, grid_step, refinement_levels):
    angles = np.arange(0.0, np.pi / 2 + grid_step / 2, grid_step)
    phases = np.arange(0.0, 2 * np.pi, grid_step)
    a, phi = np.meshgrid(angles, phases, indexing='ij')
    values = _ensemble_tangle(_two_element_mixing(a, phi), first, second)
    best = np.unravel_index(np.argmin(values), values.shape)
    best_a, best_phi, best_value = a[best], phi[best], values[best]
    log.debug('Decomposition grid best {} at a={}, phi={}'.format(best_value, best_a, best_phi))

    step = grid_step
    for level in range(refinement_levels):
        step /= 10
        offsets = np.arange(-10, 11) * step
        a, phi = np.meshgrid(best_a + offsets, best_phi + offsets, indexing='ij')
        values = _ensemble_tangle(_two_element_mixing(a, phi), first, second)
        index = np.unravel_index(np.argmin(values), values.shape)
        if values[index] < best_value:
            best_a, best_phi, best_value = a[index], phi[index], values[index]
        log.debug('Decomposition refinement level {} best {}'.format(level + 1, best_value))

    return best_value, _two_element_mixing(best_a, best_phi)


def _isometry(parameters, size):
    raw = parameters[:2 * size].reshape(size, 2) + 1j * parameters[2 * size:].reshape(size, 2)
    q, r = np.linalg.qr(raw)
    # Positive diagonal in R makes the factorization unique, so an isometry maps onto itself
    diagonal = np.diag(r)
    magnitudes = np.abs(diagonal)
    phases = np.ones_like(diagonal)
    nonzero = magnitudes > 0
    phases[nonzero] = diagonal[nonzero] / magnitudes[nonzero]
    return q * phases


def _search_many(first, second, size, seed, starts, seed_mixing):
    def objective(parameters):
        return _ensemble_tangle(_isometry(parameters, size), first, second)

    rng = np.random.default_rng(seed)
    padded = np.zeros((size, 2), dtype=complex)
    padded[:2] = seed_mixing
    initial_points = [np.concatenate([padded.real.ravel(), padded.imag.ravel()])]
    initial_points.extend(rng.normal(size=4 * size) for _ in range(starts))

    best_value, best_mixing = np.inf, None
    for point in initial_points:
        result = minimize(objective, point, method='Nelder-Mead',
                          options={'xatol': 1e-10, 'fatol': 1e-13, 'maxiter': 400 * size, 'maxfev': 800 * size})
        if result.fun < best_value:
            best_value, best_mixing = float(result.fun), _isometry(result.x, size)
    log.debug('Decomposition search with {} elements best {}'.format(size, best_value))
    return best_value, best_mixing


def decomposition_search(family, sizes=(2, 3, 4), grid_step=0.01, refinement_levels=3, seed=0, starts=3):
    """Numerical upper bound on the convex-roof three-tangle of a rank-2 family member.

    Ensembles are generated from the weighted eigen-ensemble ``sqrt(p)|phi1>, sqrt(1-p)|phi2>`` by an ``m x 2``
    isometry. Two-element ensembles are searched on a full grid over the unitary parameters followed by local grid
    refinement. Larger ensembles start from the two-element optimum and from seeded random isometries, and are refined
    with Nelder-Mead.

    Args:
        family: :class:`Rank2Family`
        sizes: Ensemble sizes to try, each in {2, 3, 4}
        grid_step: Spacing of the two-element grid in radians
        refinement_levels: Number of local refinements, each dividing the step by 10
        seed: Seed for the random starts of the larger searches
        starts: Number of random starts per larger ensemble size

    Returns:
        The best :class:`DecompositionResult` over all sizes

    """
    if not sizes or any(size not in (2, 3, 4) for size in sizes):
        raise ValidationError('Ensemble sizes must be chosen from 2, 3 and 4, received {}'.format(sizes))

    first, second = _scaled_eigenvectors(family)
    two_value, two_mixing = _search_two(first, second, grid_step, refinement_levels)

    best_value, best_mixing, best_size = np.inf, None, None
    if 2 in sizes:
        best_value, best_mixing, best_size = two_value, two_mixing, 2
    for size in sorted(set(sizes) - {2}):
        value, mixing = _search_many(first, second, size, seed + size, starts, two_mixing)
        if value < best_value:
            best_value, best_mixing, best_size = value, mixing, size

    vectors = best_mixing[:, 0, None] * first + best_mixing[:, 1, None] * second
    weights, states = [], []
    for vector in vectors:
        weight = float(np.sum(np.abs(vector) ** 2))
        weights.append(weight)
        if weight > 1e-300:
            states.append(StateVector.normalized(vector))

    return DecompositionResult(best_value, best_size, weights, states)
