import logging

import numpy as np

from pyEntangle.core.tensor import DensityMatrix, StateVector, hermitian_eig, partial_trace, partial_transpose, \
    trace_norm
from pyEntangle.internal.errors import DimensionError
from pyEntangle.internal.utils import clamp

log = logging.getLogger('pyEntangle')
__all__ = ['EntanglementRecord', 'concurrence_pure', 'concurrence_mixed', 'three_tangle_pure', 'hyperdeterminant',
           'negativity', 'pi_tangle', 'analyze_three_qubit', 'analyze_two_qubit', 'PAIRS', 'PARTIES']

PARTIES = ('A', 'B', 'C')
# Pair label -> qubit traced out to obtain the pair's reduced state
PAIRS = {'AB': 2, 'AC': 1, 'BC': 0}

# sigma_y (x) sigma_y, real in the computational basis
_SPIN_FLIP = np.array([[0, 0, 0, -1],
                       [0, 0, 1, 0],
                       [0, 1, 0, 0],
                       [-1, 0, 0, 0]], dtype=complex)

# A marginal with purity this close to 1 is treated as pure
_PURITY_TOLERANCE = 1e-9


def _as_density(value, num_qubits):
    if isinstance(value, StateVector):
        value = DensityMatrix.from_state(value)
    if not isinstance(value, DensityMatrix) or value.subsystem_dims != (2,) * num_qubits:
        raise DimensionError('Expected a {}-qubit state, received {!r}'.format(num_qubits, value))
    return value


def concurrence_pure(state):
    """ 2|a00 a11 - a01 a10| for a normalized two-qubit state. """
    if state.num_qubits != 2:
        raise DimensionError('Concurrence requires a 2-qubit state, received {} qubits'.format(state.num_qubits))
    a = state.amplitudes
    return float(2 * abs(a[0] * a[3] - a[1] * a[2]))


def concurrence_mixed(rho):
    """Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit density matrix.

    The l_i are the square roots of the eigenvalues of rho (Y(x)Y) rho* (Y(x)Y). They are computed as the singular
    values of ``W^T (Y(x)Y) W`` where ``rho = W W^dagger``, which gives the same numbers without taking square roots
    of eigenvalues that are only rounding noise.

    Args:
        rho: A two-qubit :class:`DensityMatrix <pyEntangle.core.tensor.DensityMatrix>` (a StateVector is accepted)

    Raises:
        DimensionError: The input is not a two-qubit state

    """
    rho = _as_density(rho, 2)
    spectrum = hermitian_eig(rho.matrix)
    factor = spectrum.eigenvectors * np.sqrt(np.clip(spectrum.eigenvalues, 0.0, None))
    lambdas = np.linalg.svd(factor.T @ _SPIN_FLIP @ factor, compute_uv=False)
    return float(max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]))


def hyperdeterminant(amplitudes):
    """Cayley hyperdeterminant d1 - 2 d2 + 4 d3 of three-qubit amplitudes a_ijk (index 4i + 2j + k).

    Works on the last axis, so a stack of shape ``(..., 8)`` yields one value per state. The pure-state three-tangle
    is ``4 |Det|``; for an unnormalized vector it scales with the fourth power of the norm.
    """
    a = np.asarray(amplitudes, dtype=complex)
    a000, a001, a010, a011, a100, a101, a110, a111 = (a[..., i] for i in range(8))

    d1 = (a000 ** 2 * a111 ** 2 + a001 ** 2 * a110 ** 2 + a010 ** 2 * a101 ** 2 + a100 ** 2 * a011 ** 2)
    d2 = (a000 * a111 * a011 * a100 + a000 * a111 * a101 * a010 + a000 * a111 * a110 * a001 +
          a011 * a100 * a101 * a010 + a011 * a100 * a110 * a001 + a101 * a010 * a110 * a001)
    d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100

    return d1 - 2 * d2 + 4 * d3


def three_tangle_pure(state):
    """ Three-tangle 4|Det(a)| of a normalized three-qubit state. """
    if state.num_qubits != 3:
        raise DimensionError('Three-tangle requires a 3-qubit state, received {} qubits'.format(state.num_qubits))
    return float(4 * abs(hyperdeterminant(state.amplitudes)))


def negativity(rho, part):
    """ ||rho^{T_part}|| - 1 for the cut separating subsystem ``part`` from the rest. Raw value, not clamped. """
    if isinstance(rho, StateVector):
        rho = DensityMatrix.from_state(rho)
    return trace_norm(partial_transpose(rho, part)) - 1.0


def _negativity_profile(rho):
    one_to_rest = {party: negativity(rho, index) for index, party in enumerate(PARTIES)}
    reduced = {pair: partial_trace(rho, traced) for pair, traced in PAIRS.items()}
    pairwise = {pair: negativity(state, 0) for pair, state in reduced.items()}
    return one_to_rest, pairwise, reduced


def _pi_from_profile(one_to_rest, pairwise):
    residuals = _monogamy_residuals(one_to_rest, pairwise)
    return sum(residuals.values()) / 3.0


def _monogamy_residuals(one_to_rest, pairwise):
    residuals = {}
    for party in PARTIES:
        pairs = [pair for pair in PAIRS if party in pair]
        residuals[party] = one_to_rest[party] ** 2 - sum(pairwise[pair] ** 2 for pair in pairs)
    return residuals


def pi_tangle(rho):
    """The negativity-based pi-tangle (pi_A + pi_B + pi_C) / 3.

    ``pi_A = N_A(BC)^2 - N_AB^2 - N_AC^2`` and likewise for B and C, where the two-party negativities are taken on
    the reduced state after tracing out the third qubit.

    Args:
        rho: A three-qubit DensityMatrix; pure states are accepted and converted to their projector

    Returns:
        The raw value; report layers clamp tiny negatives to 0

    """
    rho = _as_density(rho, 3)
    one_to_rest, pairwise, _ = _negativity_profile(rho)
    return _pi_from_profile(one_to_rest, pairwise)


class EntanglementRecord(object):
    """Entanglement measures of one state.

    Values are raw; :meth:`clamped` gives the reported form with floating point noise below zero removed.

    Attributes:
        three_tangle: tau_3, or None where it is unavailable (mixed states outside the known families)
        pi_tangle: pi_ABC, or None for two-qubit states
        pairwise_concurrences: Pair label ('AB', 'AC', 'BC') -> Wootters concurrence of the reduced state
        one_to_rest_negativities: Party label ('A', 'B', 'C') -> negativity of that party against the rest
        pairwise_negativities: Pair label -> negativity of the reduced two-qubit state
        three_tangle_roof: The exact convex roof where known; equals three_tangle except on the rank-2 family
        family: The matched :class:`Rank2Family <pyEntangle.core.rank2.Rank2Family>`, if any
        source: How the three-tangle was obtained: 'pure', 'biseparable', 'rank-2 family' or 'unavailable'

    """
    def __init__(self, three_tangle=None, pi_tangle=None, pairwise_concurrences=None, one_to_rest_negativities=None,
                 pairwise_negativities=None, three_tangle_roof=None, family=None, source='unavailable'):
        self.three_tangle = three_tangle
        self.pi_tangle = pi_tangle
        self.pairwise_concurrences = pairwise_concurrences or {}
        self.one_to_rest_negativities = one_to_rest_negativities or {}
        self.pairwise_negativities = pairwise_negativities or {}
        self.three_tangle_roof = three_tangle_roof
        self.family = family
        self.source = source

    def __str__(self):
        return 'EntanglementRecord(tau3={}, pi3={}, C={})'.format(self.three_tangle, self.pi_tangle,
                                                                   self.pairwise_concurrences)

    def __repr__(self):
        return str(self)

    def monogamy_residuals(self):
        """ N_X(rest)^2 - sum of N_XY^2 over the pairs containing X; non-negative when monogamy holds. Empty for
        two-qubit records. """
        if not self.pairwise_negativities:
            return {}
        return _monogamy_residuals(self.one_to_rest_negativities, self.pairwise_negativities)

    def clamped(self):
        """ A copy with values in [-1e-10, 0) reported as 0. """
        return EntanglementRecord(
            three_tangle=clamp(self.three_tangle),
            pi_tangle=clamp(self.pi_tangle),
            pairwise_concurrences={k: clamp(v) for k, v in self.pairwise_concurrences.items()},
            one_to_rest_negativities={k: clamp(v) for k, v in self.one_to_rest_negativities.items()},
            pairwise_negativities={k: clamp(v) for k, v in self.pairwise_negativities.items()},
            three_tangle_roof=clamp(self.three_tangle_roof),
            family=self.family,
            source=self.source)

    def to_dict(self):
        values = {'tau3': self.three_tangle, 'pi3': self.pi_tangle, 'tau3_roof': self.three_tangle_roof}
        values.update({'C_' + pair: value for pair, value in self.pairwise_concurrences.items()})
        values.update({'N_' + party: value for party, value in self.one_to_rest_negativities.items()})
        values.update({'N_' + pair: value for pair, value in self.pairwise_negativities.items()})
        return values


def analyze_three_qubit(state):
    """Bundles every measure of a three-qubit state.

    The three-tangle is filled in for pure states (including rank-1 density matrices), for states that are a product
    across some single-qubit cut (tau_3 = 0, since every decomposition element is biseparable), and for density
    matrices matching the rank-2 family. Otherwise it stays None.

    Args:
        state: A three-qubit StateVector or DensityMatrix

    Returns:
        :class:`EntanglementRecord`

    """
    from pyEntangle.core.rank2 import match_rank2_family, rank2_convex_roof, rank2_three_tangle

    pure = state if isinstance(state, StateVector) else None
    rho = _as_density(state, 3)

    if pure is None:
        spectrum = rho.spectrum()
        if spectrum.rank <= 1:
            pure = StateVector.normalized(spectrum.eigenvector(0))

    one_to_rest, pairwise_negativities, reduced = _negativity_profile(rho)
    concurrences = {pair: concurrence_mixed(pair_state) for pair, pair_state in reduced.items()}

    record = EntanglementRecord(pi_tangle=_pi_from_profile(one_to_rest, pairwise_negativities),
                                pairwise_concurrences=concurrences,
                                one_to_rest_negativities=one_to_rest,
                                pairwise_negativities=pairwise_negativities)

    if pure is not None:
        record.three_tangle = record.three_tangle_roof = three_tangle_pure(pure)
        record.source = 'pure'
    elif any(partial_trace(rho, [i for i in range(3) if i != kept]).purity() >= 1 - _PURITY_TOLERANCE
             for kept in range(3)):
        record.three_tangle = record.three_tangle_roof = 0.0
        record.source = 'biseparable'
    else:
        family = match_rank2_family(rho)
        if family is not None:
            record.family = family
            record.three_tangle = rank2_three_tangle(family)
            record.three_tangle_roof = rank2_convex_roof(family)
            record.source = 'rank-2 family'
        else:
            log.debug('Three-tangle unavailable for a mixed state outside the known families')

    return record


def analyze_two_qubit(state):
    """ Concurrence and negativity of a two-qubit StateVector or DensityMatrix. """
    rho = _as_density(state, 2)
    if isinstance(state, StateVector):
        concurrence = concurrence_pure(state)
    else:
        concurrence = concurrence_mixed(rho)
    return EntanglementRecord(pairwise_concurrences={'AB': concurrence},
                              one_to_rest_negativities={'A': negativity(rho, 0), 'B': negativity(rho, 1)},
                              source='pure' if isinstance(state, StateVector) else 'unavailable')
