# Phase estimation and the HHL pipeline on the 2x2 worked example
import logging

import numpy as np

from pyEntangle.core.circuit import Circuit, Gate, qpe_circuit, ry, run
from pyEntangle.core.entanglement import EntanglementRecord, analyze_three_qubit, pi_tangle, three_tangle_pure
from pyEntangle.core.rank2 import Rank2Family, match_rank2_family, rank2_convex_roof, rank2_three_tangle, \
    support_basis
from pyEntangle.core.report import CHECK_TOLERANCE, Report
from pyEntangle.core.tensor import DensityMatrix, StateVector, hermitian_eig, partial_trace
from pyEntangle.internal.errors import DimensionError, ValidationError
from pyEntangle.internal.utils import align_global_phase, basis_index, check_hermitian

log = logging.getLogger('pyEntangle')
__all__ = ['HhlProblem', 'HhlStageStates', 'ClosedFormParams', 'qpe', 'hhl_circuit', 'hhl_run', 'rotation_gate',
           'closed_form_states', 'closed_form_params', 'closed_form_tangles', 'extract_solution', 'cross_validate',
           'HHL_MATRIX', 'HHL_TIME', 'CLOCK_BITS', 'DEFAULT_ROTATION_CONSTANT']

HHL_MATRIX = np.array([[3.0, 1.0], [1.0, 3.0]]) / 2
HHL_TIME = 2 * np.pi / 4
CLOCK_BITS = 2
DEFAULT_ROTATION_CONSTANT = (np.sin(np.pi / 4) + 2 * np.sin(np.pi / 8)) / 2

# Amplitude normalization tolerance for b
_B_TOLERANCE = 1e-12
# Below this norm an eigenvector candidate of the 2x2 rho3 block is treated as rounding noise
_EIGENVECTOR_TOLERANCE = 1e-12


class HhlProblem(object):
    """A linear system A x = b for the HHL circuit.

    The register is ``(clock_0 .. clock_{n-1}, system, ancilla)`` with the clock first and the ancilla last.

    Attributes:
        b0, b1: Real amplitudes of |b> with b0^2 + b1^2 = 1
        rotation_constant: C of the eigenvalue-inversion rotation, in (0, min eigenvalue]
        matrix: The Hermitian matrix A
        time: Evolution time t of e^{iAt}
        clock_bits: Size of the clock register

    """
    def __init__(self, b0, b1, rotation_constant=DEFAULT_ROTATION_CONSTANT, matrix=HHL_MATRIX, time=HHL_TIME,
                 clock_bits=CLOCK_BITS):
        b0, b1 = float(b0), float(b1)
        if abs(b0 * b0 + b1 * b1 - 1.0) > _B_TOLERANCE:
            raise ValidationError('b must be normalized, received b0={}, b1={}'.format(b0, b1))

        matrix = np.array(check_hermitian(matrix), dtype=float)
        if matrix.shape != (2, 2):
            raise DimensionError('Only 2x2 systems are supported, received shape {}'.format(matrix.shape))
        if clock_bits < 1:
            raise ValidationError('At least one clock qubit is required')

        smallest = hermitian_eig(matrix).eigenvalues[-1]
        if not 0.0 < rotation_constant <= smallest + 1e-12:
            raise ValidationError('Rotation constant must lie in (0, {}], received {}'
                                  .format(smallest, rotation_constant))

        self.b0, self.b1 = b0, b1
        self.rotation_constant = float(rotation_constant)
        self.matrix = matrix
        self.time = float(time)
        self.clock_bits = int(clock_bits)

    def __str__(self):
        return 'HhlProblem(b=({:.6g}, {:.6g}), C={:.6g})'.format(self.b0, self.b1, self.rotation_constant)

    def __repr__(self):
        return str(self)

    @classmethod
    def from_b0_squared(cls, b0_squared, rotation_constant=DEFAULT_ROTATION_CONSTANT, negative_b1=False):
        """ b0 = sqrt(b0_sq) and b1 = +/- sqrt(1 - b0_sq), the parameterization of the b0^2 sweep. """
        if not 0.0 <= b0_squared <= 1.0:
            raise ValidationError('b0^2 must lie in [0, 1], received {}'.format(b0_squared))
        b1 = np.sqrt(1.0 - b0_squared)
        return cls(np.sqrt(b0_squared), -b1 if negative_b1 else b1, rotation_constant)

    @property
    def b(self):
        return np.array([self.b0, self.b1])

    @property
    def num_qubits(self):
        return self.clock_bits + 2

    @property
    def ancilla(self):
        return self.clock_bits + 1

    @property
    def is_worked_example(self):
        """ Whether this is the A, t and clock size for which the closed forms hold. """
        return (self.clock_bits == CLOCK_BITS and np.isclose(self.time, HHL_TIME) and
                np.allclose(self.matrix, HHL_MATRIX))

    def solution(self):
        """ A^-1 b """
        return np.linalg.solve(self.matrix, self.b)

    def with_rotation_constant(self, rotation_constant):
        return HhlProblem(self.b0, self.b1, rotation_constant, self.matrix, self.time, self.clock_bits)


def qpe(matrix, time, clock_bits, state):
    """Phase estimation of e^{iAt} on ``state`` with a fresh clock register.

    Args:
        matrix: Hermitian matrix A
        time: Evolution time t
        clock_bits: Size of the clock register
        state: :class:`StateVector <pyEntangle.core.tensor.StateVector>` of the system register

    Returns:
        The StateVector over ``(clock, system)``; for exactly representable phases this is
        ``sum_i beta_i |lambda_i>|u_i>``

    """
    circuit = qpe_circuit(matrix, time, clock_bits, state.num_qubits)
    initial = StateVector.basis(clock_bits, 0).tensor(state)
    return run(circuit, initial).final


def rotation_gate(problem):
    """Eigenvalue-inversion rotation on ``(clock..., ancilla)``.

    Clock value k encodes the eigenvalue ``2 pi k / (t 2^n)``; the ancilla is rotated by ``Ry(2 arcsin(C/lambda))``,
    giving ``sqrt(1 - C^2/lambda^2)|0> + C/lambda|1>``. The clock value 0 is left alone.
    """
    clock_states = 2 ** problem.clock_bits
    matrix = np.zeros((2 * clock_states, 2 * clock_states), dtype=complex)
    matrix[0:2, 0:2] = np.eye(2)
    for k in range(1, clock_states):
        eigenvalue = 2 * np.pi * k / (problem.time * clock_states)
        angle = 2 * np.arcsin(min(1.0, problem.rotation_constant / eigenvalue))
        matrix[2 * k:2 * k + 2, 2 * k:2 * k + 2] = ry(angle).matrix
    return Gate(matrix, 'R(1/lambda)')


def hhl_circuit(problem):
    """ QPE, eigenvalue-inversion rotation and inverse QPE, with snapshots ``psi1``, ``psi2`` and ``psi3``. """
    clock = list(range(problem.clock_bits))
    system = [problem.clock_bits]
    estimation = qpe_circuit(problem.matrix, problem.time, problem.clock_bits, 1)

    circuit = Circuit(problem.num_qubits)
    circuit = circuit.compose(estimation, clock + system).snapshot('psi1', 'post-QPE')
    circuit = circuit.add(rotation_gate(problem), clock + [problem.ancilla]).snapshot('psi2', 'post-rotation')
    circuit = circuit.compose(estimation.inverse(), clock + system).snapshot('psi3', 'post-inverse-QPE')
    return circuit


class HhlStageStates(object):
    """States of one HHL run.

    Attributes:
        problem: The :class:`HhlProblem`
        trace: The full :class:`StageTrace <pyEntangle.core.circuit.StageTrace>`
        psi1, psi2, psi3: Register states after QPE, the rotation and inverse QPE
        psi1_bar: psi1 without the ancilla, which is still |0> after QPE
        rho1_bar, rho2_bar, rho3_bar: Three-qubit states with the ancilla traced out

    """
    def __init__(self, problem, trace):
        self.problem = problem
        self.trace = trace
        self.psi1 = trace['psi1'].state
        self.psi2 = trace['psi2'].state
        self.psi3 = trace['psi3'].state

        ancilla = problem.ancilla
        self.rho1_bar = partial_trace(DensityMatrix.from_state(self.psi1), ancilla)
        self.rho2_bar = partial_trace(DensityMatrix.from_state(self.psi2), ancilla)
        self.rho3_bar = partial_trace(DensityMatrix.from_state(self.psi3), ancilla)
        self.psi1_bar = StateVector(self.psi1.amplitudes.reshape(-1, 2)[:, 0])

    def __repr__(self):
        return 'HhlStageStates({})'.format(self.problem)


def hhl_run(problem):
    # type: (HhlProblem) -> HhlStageStates
    initial = StateVector.basis(problem.clock_bits, 0).tensor(StateVector(problem.b)).tensor(StateVector.basis(1, 0))
    trace = run(hhl_circuit(problem), initial)
    log.debug('HHL run finished for {}'.format(problem))
    return HhlStageStates(problem, trace)


def extract_solution(psi3, problem=None):
    """Post-selects the ancilla on 1 after inverse QPE.

    Args:
        psi3: The final HHL register state
        problem: When given, the overall sign is chosen so the result has positive overlap with A^-1 b

    Returns:
        A tuple of the normalized solution vector (real parts, the branch being real up to a global phase) and the
        probability of measuring the ancilla as 1

    """
    branch = psi3.amplitudes.reshape(-1, 2)[:, 1]
    # The clock is uncomputed, so the branch lives on the system amplitudes of clock value 0
    system = branch[:2]
    probability = float(np.sum(np.abs(branch) ** 2))
    if probability == 0.0:
        raise ValidationError('Ancilla is never measured as 1')

    pivot = system[np.argmax(np.abs(system))]
    solution = np.real(system * (abs(pivot) / pivot)) / np.linalg.norm(system)
    if problem is not None and np.dot(solution, problem.solution()) < 0:
        solution = -solution
    return solution, probability


class ClosedFormParams(object):
    """ Every closed-form quantity of the three-qubit HHL states, see :func:`closed_form_params`. """
    def __init__(self, **values):
        self.beta1 = values['beta1']
        self.beta2 = values['beta2']
        self.gamma = values['gamma']
        self.p = values['p']
        self.a1 = values['a1']
        self.a2 = values['a2']
        self.x1 = values['x1']
        self.x2 = values['x2']
        self.A_coef = values['A_coef']
        self.B_coef = values['B_coef']
        self.C1 = values['C1']
        self.C2 = values['C2']
        self.q = values['q']
        self.f1 = values['f1']
        self.f2 = values['f2']
        self.y1 = values['y1']
        self.y2 = values['y2']
        self.p_minus = values['p_minus']
        self.p_plus = values['p_plus']

    def __repr__(self):
        return 'ClosedFormParams(p={:.6g}, x1={:.6g}, q={:.6g})'.format(self.p, self.x1, self.q)

    @property
    def degenerate(self):
        """ beta1 beta2 = 0: rho2_bar is pure and p = 1. """
        return abs(self.beta1 * self.beta2) < 1e-15

    def family(self):
        # Signs of x1, x2 are a local phase away from the non-negative family member
        return Rank2Family(min(1.0, abs(self.x1)), min(1.0, self.p), min(1.0, abs(self.x2)))


def _require_worked_example(problem):
    if not problem.is_worked_example:
        raise ValidationError('Closed forms only hold for the 2x2 example with 2 clock qubits and t = 2 pi / 4')


def closed_form_params(problem, rotation_constant=None):
    """Spectral data of the ancilla-traced states in closed form.

    ``rho2_bar = p |phi1><phi1| + (1 - p)|phi2><phi2|`` with the rank-2 family vectors at (x1, x2), and
    ``rho3_bar = q |phi~1><phi~1| + (1 - q)|phi~2><phi~2|`` with ``|phi~1> = |00>(y1|0> + y2|1>)``.

    Args:
        problem: :class:`HhlProblem` on the worked example
        rotation_constant: Overrides the problem's C

    Returns:
        :class:`ClosedFormParams`

    """
    _require_worked_example(problem)
    c = problem.rotation_constant if rotation_constant is None else float(rotation_constant)
    b0, b1 = problem.b0, problem.b1

    beta1, beta2 = (b0 - b1) / np.sqrt(2), (b0 + b1) / np.sqrt(2)
    gamma = np.sqrt((1 - c ** 2) * (1 - c ** 2 / 4)) + c ** 2 / 2
    root = np.sqrt(max(0.0, 1 - 4 * beta1 ** 2 * beta2 ** 2 * (1 - gamma ** 2)))
    p = 0.5 * (1 + root)
    a1 = beta1 * (1 + root - 2 * beta2 ** 2 * (1 - gamma ** 2))
    a2 = beta2 * gamma * (1 + root)
    a_norm = np.sqrt(a1 ** 2 + a2 ** 2)
    x1, x2 = a1 / a_norm, a2 / a_norm
    p_minus, p_plus = min(a1 ** 2, a2 ** 2) / a_norm ** 2, max(a1 ** 2, a2 ** 2) / a_norm ** 2

    s1, s2 = np.sqrt(1 - c ** 2), np.sqrt(1 - c ** 2 / 4)
    A_coef = 0.5 * ((b0 - b1) * s1 + (b0 + b1) * s2)
    B_coef = 0.5 * (-(b0 - b1) * s1 + (b0 + b1) * s2)
    C1 = c * (3 * b0 - b1) / 4
    C2 = c * (-b0 + 3 * b1) / 4
    discriminant = np.sqrt(max(0.0, 1 - 4 * (A_coef * C2 - B_coef * C1) ** 2))
    q = 0.5 * (1 + discriminant)
    f1 = A_coef ** 2 - B_coef ** 2 + C1 ** 2 - C2 ** 2 + discriminant
    f2 = 2 * (A_coef * B_coef + C1 * C2)
    f_norm = np.hypot(f1, f2)
    if f_norm > _EIGENVECTOR_TOLERANCE:
        y1, y2 = f1 / f_norm, f2 / f_norm
    else:
        # (f1, f2) solves the second row of (M - q) y = 0 and vanishes at b0^2 = 0; use the first row of
        # M = [[A^2 + C1^2, AB + C1 C2], [AB + C1 C2, B^2 + C2^2]]
        g1 = f2
        g2 = B_coef ** 2 + C2 ** 2 - A_coef ** 2 - C1 ** 2 + discriminant
        g_norm = np.hypot(g1, g2)
        y1, y2 = (g1 / g_norm, g2 / g_norm) if g_norm > _EIGENVECTOR_TOLERANCE else (0.0, 1.0)

    return ClosedFormParams(beta1=beta1, beta2=beta2, gamma=gamma, p=p, a1=a1, a2=a2, x1=x1, x2=x2, A_coef=A_coef,
                            B_coef=B_coef, C1=C1, C2=C2, q=q, f1=f1, f2=f2, y1=y1, y2=y2, p_minus=p_minus,
                            p_plus=p_plus)


def closed_form_tangles(problem, rotation_constant=None):
    """Closed-form tangles of the three ancilla-traced stages.

    Stage 1 has ``tau_3 = pi_3 = (b0^2 - b1^2)^2``. Stage 2 uses the convex hull ``g(p) = min(g+, g-)`` outside
    ``[p-, p+]`` and ``pi_3 = 4 a1^2 a2^2 (2p - 1)^2 / (a1^2 + a2^2)^2``. Stage 3 is fully separable.

    Returns:
        A tuple of three :class:`EntanglementRecord <pyEntangle.core.entanglement.EntanglementRecord>`

    """
    params = closed_form_params(problem, rotation_constant)
    b0, b1 = problem.b0, problem.b1

    stage1 = (b0 ** 2 - b1 ** 2) ** 2
    first = EntanglementRecord(three_tangle=stage1, pi_tangle=stage1, three_tangle_roof=stage1, source='pure')

    if params.degenerate:
        second = EntanglementRecord(three_tangle=0.0, pi_tangle=0.0, three_tangle_roof=0.0, source='pure')
    else:
        p, a1, a2 = params.p, params.a1, params.a2
        a_squared = a1 ** 2 + a2 ** 2
        spread = np.sqrt(p * (1 - p)) * (a1 ** 2 - a2 ** 2)
        g_plus = 4 / a_squared ** 2 * ((2 * p - 1) * a1 * a2 + spread) ** 2
        g_minus = 4 / a_squared ** 2 * ((2 * p - 1) * a1 * a2 - spread) ** 2
        hull = 0.0 if params.p_minus <= p <= params.p_plus else min(g_plus, g_minus)
        pi3 = 4 * a1 ** 2 * a2 ** 2 / a_squared ** 2 * (2 * p - 1) ** 2
        family = params.family()
        second = EntanglementRecord(three_tangle=hull, pi_tangle=pi3, three_tangle_roof=rank2_convex_roof(family),
                                    family=family, source='rank-2 family')

    third = EntanglementRecord(three_tangle=0.0, pi_tangle=0.0, three_tangle_roof=0.0, source='biseparable')
    return first, second, third


def closed_form_states(problem):
    """The three register states built directly from their closed forms, independent of the circuit.

    Returns:
        A tuple ``(psi1, psi2, psi3)`` of StateVectors over ``(clock_0, clock_1, system, ancilla)``

    """
    _require_worked_example(problem)
    b0, b1, c = problem.b0, problem.b1, problem.rotation_constant

    def ancilla(eigenvalue):
        return np.sqrt(1 - c ** 2 / eigenvalue ** 2), c / eigenvalue

    psi1 = np.zeros(16, dtype=complex)
    psi2 = np.zeros(16, dtype=complex)
    # |lambda=1> = |01> carries (b0 - b1)(|0> - |1>)/2; |lambda=2> = |10> carries (b0 + b1)(|0> + |1>)/2
    for clock, eigenvalue, weight, signs in (((0, 1), 1, b0 - b1, (1, -1)), ((1, 0), 2, b0 + b1, (1, 1))):
        for system, sign in enumerate(signs):
            amplitude = weight * sign / 2
            psi1[basis_index(clock + (system, 0))] = amplitude
            for bit, factor in enumerate(ancilla(eigenvalue)):
                psi2[basis_index(clock + (system, bit))] = amplitude * factor

    params = closed_form_params(problem)
    x0, x1 = np.array([3 * b0 - b1, -b0 + 3 * b1]) / 4
    psi3 = np.zeros(16, dtype=complex)
    psi3[basis_index((0, 0, 0, 0))] = params.A_coef
    psi3[basis_index((0, 0, 1, 0))] = params.B_coef
    psi3[basis_index((0, 0, 0, 1))] = c * x0
    psi3[basis_index((0, 0, 1, 1))] = c * x1

    return StateVector(psi1), StateVector(psi2), StateVector(psi3)


def _support_sign_error(vector):
    # Deviation of an eigenvector from a|010> - a|011> + b|100> + b|101>
    off_support = np.delete(vector, [2, 3, 4, 5])
    return max(np.max(np.abs(off_support)), abs(vector[2] + vector[3]), abs(vector[4] - vector[5]))


def cross_validate(problem, closed_form_constant=None, tolerance=CHECK_TOLERANCE):
    """Compares the simulated HHL run with the closed forms.

    Args:
        problem: :class:`HhlProblem` on the worked example
        closed_form_constant: Rotation constant handed to the closed forms only; defaults to the problem's own.
            A different value makes the comparison fail, which is how the checks themselves are tested.
        tolerance: Tolerance applied to every check

    Returns:
        :class:`Report <pyEntangle.core.report.Report>`; discrepancies are entries, never exceptions

    """
    closed_problem = problem if closed_form_constant is None else problem.with_rotation_constant(closed_form_constant)
    states = hhl_run(problem)
    params = closed_form_params(closed_problem)
    first, second, third = closed_form_tangles(closed_problem)
    report = Report()

    for label, closed in zip(('psi1', 'psi2', 'psi3'), closed_form_states(closed_problem)):
        _, distance = align_global_phase(closed.amplitudes, getattr(states, label).amplitudes)
        report.add('{}-state'.format(label), distance, tolerance)

    report.add('psi1-three-tangle', abs(three_tangle_pure(states.psi1_bar) - first.three_tangle), tolerance)
    report.add('psi1-pi-tangle', abs(pi_tangle(states.psi1_bar) - first.pi_tangle), tolerance)

    spectrum = states.rho2_bar.spectrum()
    phi1 = params.x1 * support_basis()[:, 0] + params.x2 * support_basis()[:, 1]
    _, vector_error = align_global_phase(phi1, spectrum.eigenvector(0))
    report.add('rho2-spectrum', max(abs(spectrum.eigenvalues[0] - params.p), vector_error), tolerance)
    report.add('rho2-support', max(_support_sign_error(spectrum.eigenvector(i)) for i in range(spectrum.rank)),
               tolerance)

    family = match_rank2_family(states.rho2_bar)
    if family is None:
        report.add('rho2-three-tangle', np.inf, tolerance, detail='rho2 outside the rank-2 support')
    else:
        report.add('rho2-three-tangle', abs(rank2_three_tangle(family) - second.three_tangle), tolerance)
    report.add('rho2-pi-tangle', abs(pi_tangle(states.rho2_bar) - second.pi_tangle), tolerance)

    spectrum = states.rho3_bar.spectrum()
    error = abs(spectrum.eigenvalues[0] - params.q)
    if spectrum.eigenvalues[0] - spectrum.eigenvalues[1] > 1e-6:
        varphi1 = np.zeros(8)
        varphi1[0:2] = params.y1, params.y2
        _, vector_error = align_global_phase(varphi1, spectrum.eigenvector(0))
        error = max(error, vector_error)
    report.add('rho3-spectrum', error, tolerance)

    record = analyze_three_qubit(states.rho3_bar)
    report.add('rho3-tangles', max(abs(record.three_tangle - third.three_tangle),
                                   abs(record.pi_tangle - third.pi_tangle)), tolerance)

    concurrences = [value for rho in (states.rho1_bar, states.rho2_bar, states.rho3_bar)
                    for value in analyze_three_qubit(rho).pairwise_concurrences.values()]
    report.add('pairwise-concurrences', max(concurrences), 1e-9)

    solution, _ = extract_solution(states.psi3, problem)
    expected = closed_problem.solution() / np.linalg.norm(closed_problem.solution())
    report.add('solution-direction', np.max(np.abs(solution - expected)), tolerance)

    report.add('stage-ordering', max(0.0, second.three_tangle - first.three_tangle,
                                     second.pi_tangle - first.pi_tangle), 1e-12)
    return report
