import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from pyEntangle.core.circuit import H, SWAP, X, Y, Z, Gate, apply, hamiltonian_evolution, qft, run
from pyEntangle.core.entanglement import analyze_three_qubit, concurrence_mixed, concurrence_pure, pi_tangle, \
    three_tangle_pure
from pyEntangle.core.grover import grover_run, grover_table, theoretical_success_probability
from pyEntangle.core.hhl import HhlProblem, closed_form_tangles, cross_validate, extract_solution, hhl_run
from pyEntangle.core.rank2 import Rank2Family, decomposition_search, rank2_convex_roof, rank2_f, rank2_p_bounds, \
    rank2_three_tangle
from pyEntangle.core.report import Report
from pyEntangle.core.tensor import DensityMatrix, StateVector, ghz_state, hermitian_eig, w_state

log = logging.getLogger('pyEntangle')
__all__ = ['run_verification', 'random_state', 'random_unitary', 'random_hermitian', 'TABLE_EXPECTED',
           'DEFAULT_ORACLE_POINTS']

# Three-tangle and pairwise concurrence of psi1..psi4 for N = 8
TABLE_EXPECTED = [(1 / 4, 1 / 2), (1 / 16, 1 / 4), (9 / 64, 3 / 8), (9 / 256, 3 / 16)]

# (x1, p) points where the decomposition oracle is compared with the closed forms
DEFAULT_ORACLE_POINTS = [(x1, p) for x1 in np.linspace(0.05, 0.95, 10) for p in np.linspace(0, 1, 10)] + [(0.8, 0.64)]


def random_state(rng, num_qubits):
    amplitudes = rng.normal(size=2 ** num_qubits) + 1j * rng.normal(size=2 ** num_qubits)
    return StateVector.normalized(amplitudes)


def random_unitary(rng, dimension):
    """ Haar-distributed unitary from the QR decomposition of a complex Gaussian matrix. """
    q, r = np.linalg.qr(rng.normal(size=(dimension, dimension)) + 1j * rng.normal(size=(dimension, dimension)))
    diagonal = np.diag(r)
    return q * (diagonal / np.abs(diagonal))


def random_hermitian(rng, dimension):
    matrix = rng.normal(size=(dimension, dimension)) + 1j * rng.normal(size=(dimension, dimension))
    return (matrix + matrix.conj().T) / 2


def _check_grover(report):
    table = grover_table(3, 7, 2)
    deviation = 0.0
    for (_, row), (tau, concurrence) in zip(table.iterrows(), TABLE_EXPECTED):
        deviation = max(deviation, abs(row['tau3'] - tau),
                        *(abs(row[column] - concurrence) for column in ('C_AB', 'C_AC', 'C_BC')))
    report.add('grover-table', deviation, 1e-9)

    small = grover_run(2, 3, 1)
    report.add('grover-n2-success', abs(small.success_probability - 1), 1e-12)
    oracle_record = small.trace['psi1'].record
    report.add('grover-n2-oracle-concurrence', abs(oracle_record.pairwise_concurrences['AB'] - 1), 1e-10)

    shortfall = 0.0
    for num_qubits in range(2, 7):
        result = grover_run(num_qubits, 2 ** num_qubits - 1)
        expected = theoretical_success_probability(num_qubits, result.iterations)
        shortfall = max(shortfall, abs(result.success_probability - expected), 0.94 - result.success_probability)
    report.add('grover-success-probability', shortfall, 1e-10)


def _check_reference_states(report):
    report.add('pi-tangle-ghz', abs(pi_tangle(ghz_state()) - 1), 1e-9)
    report.add('pi-tangle-w', abs(pi_tangle(w_state()) - 4 / 9 * (np.sqrt(5) - 1)), 1e-9)
    report.add('three-tangle-ghz', abs(three_tangle_pure(ghz_state()) - 1), 1e-9)


def _check_properties(report, rng):
    error = 0.0
    for index in range(100):
        matrix = random_hermitian(rng, 1 + index % 16)
        spectrum = hermitian_eig(matrix)
        vectors = spectrum.eigenvectors
        error = max(error, np.max(np.abs(spectrum.reconstruct() - matrix)),
                    np.max(np.abs(vectors.conj().T @ vectors - np.eye(len(spectrum)))))
    report.add('eigensolver-reconstruction', error, 1e-10)

    error = 0.0
    for gate in (H, X, Y, Z, SWAP, hamiltonian_evolution(random_hermitian(rng, 4), rng.normal())):
        error = max(error, np.max(np.abs(gate.matrix @ gate.matrix.conj().T - np.eye(gate.matrix.shape[0]))))
    report.add('gate-unitarity', error, 1e-10)

    error = 0.0
    for _ in range(10):
        state = random_state(rng, 3)
        trace = run(qft(3).compose(qft(3, inverse=True)), state)
        error = max(error, np.max(np.abs(trace.final.amplitudes - state.amplitudes)), abs(trace.final.norm - 1))
    report.add('qft-inverse-and-norm', error, 1e-10)

    error = 0.0
    for _ in range(200):
        state = random_state(rng, 2)
        error = max(error, abs(concurrence_mixed(DensityMatrix.from_state(state)) - concurrence_pure(state)))
    report.add('wootters-matches-pure', error, 1e-9)

    error = 0.0
    for _ in range(20):
        state = random_state(rng, 3)
        for qubit in range(3):
            local = Gate(random_unitary(rng, 2))
            rotated = apply(state, local, [qubit])
            error = max(error, abs(three_tangle_pure(rotated) - three_tangle_pure(state)))
    report.add('three-tangle-local-invariance', error, 1e-9)


def _check_rank2(report, oracle_points):
    error = 0.0
    for x1 in np.linspace(0, 1, 101):
        family = Rank2Family(x1, 0.5)
        p_minus, p_plus = rank2_p_bounds(family)
        error = max(error, rank2_f(family.with_p(p_minus)), rank2_f(family.with_p(p_plus)))
    report.add('rank2-f-zeros', error, 1e-10)

    excess, quality, gap = 0.0, 0.0, 0.0
    for x1, p in oracle_points:
        family = Rank2Family(x1, p)
        oracle = decomposition_search(family, sizes=(2,)).value
        closed = rank2_three_tangle(family)
        excess = max(excess, closed - oracle)
        quality = max(quality, abs(oracle - rank2_convex_roof(family)))
        gap = max(gap, oracle - closed)
    report.add('rank2-hull-below-oracle', excess, 1e-9)
    report.add('rank2-oracle-matches-roof', quality, 1e-3)
    report.add('rank2-oracle-minus-hull', gap, 1e-3, note=True, detail='hull is a lower bound on the convex roof')


def _grid_point(b0_squared, rotation_constant, closed_form_constant):
    problem = HhlProblem.from_b0_squared(b0_squared, rotation_constant)
    report = cross_validate(problem, closed_form_constant)

    states = hhl_run(problem)
    first, second, _ = closed_form_tangles(problem)
    residual = 0.0
    for rho in (states.rho1_bar, states.rho2_bar, states.rho3_bar):
        residual = min(residual, min(analyze_three_qubit(rho).monogamy_residuals().values()))
    report.add('monogamy', -residual, 1e-9)

    norm_error = max(abs(stage.state.norm - 1) for stage in states.trace)
    report.add('run-norm', norm_error, 1e-10)
    return report


def _check_hhl(report, config, closed_form_constant, rng):
    grid = config.grid()
    arguments = [(b0_squared, config.rotation_constant, closed_form_constant) for b0_squared in grid]
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            reports = list(pool.map(lambda args: _grid_point(*args), arguments))
    else:
        reports = [_grid_point(*args) for args in arguments]
    for point in reports:
        report.merge(point)

    endpoint = max(abs(closed_form_tangles(HhlProblem.from_b0_squared(value, config.rotation_constant))[0]
                       .three_tangle - 1) for value in (0.0, 1.0))
    report.add('stage1-endpoints', endpoint, 1e-12)

    error = 0.0
    for _ in range(20):
        angle = rng.uniform(0, 2 * np.pi)
        problem = HhlProblem(np.cos(angle), np.sin(angle), config.rotation_constant)
        solution, _ = extract_solution(hhl_run(problem).psi3, problem)
        expected = problem.solution() / np.linalg.norm(problem.solution())
        error = max(error, np.linalg.norm(solution - expected))
    report.add('hhl-random-b-direction', error, 1e-8)


def run_verification(config, closed_form_constant=None, seed=0, oracle_points=None):
    """Runs the full invariant suite.

    Args:
        config: :class:`SweepConfig <pyEntangle.core.sweep.SweepConfig>` supplying the b0^2 grid, C and workers
        closed_form_constant: Rotation constant handed only to the closed forms
        seed: Seed for the randomized property checks
        oracle_points: (x1, p) pairs for the convex-roof oracle; :data:`DEFAULT_ORACLE_POINTS` when omitted

    Returns:
        :class:`Report <pyEntangle.core.report.Report>`

    """
    rng = np.random.default_rng(seed)
    if oracle_points is None:
        oracle_points = DEFAULT_ORACLE_POINTS

    report = Report()
    _check_hhl(report, config, closed_form_constant, rng)
    _check_grover(report)
    _check_reference_states(report)
    _check_properties(report, rng)
    _check_rank2(report, oracle_points)

    log.debug('Verification finished with {} checks, {} failures'.format(len(report), len(report.failures)))
    return report
