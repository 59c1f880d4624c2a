# Sample states and expected values shared across the test modules
import numpy as np

from pyEntangle.core.tensor import DensityMatrix, StateVector
from pyEntangle.core.verification import random_hermitian, random_state  # noqa: F401

# (tau3, pairwise concurrence) of psi1..psi4 for Grover search on 3 qubits
grover_table_expected = [(1 / 4, 1 / 2), (1 / 16, 1 / 4), (9 / 64, 3 / 8), (9 / 256, 3 / 16)]

# A = [[3, 1], [1, 3]] / 2 has eigenvalue 1 on u1 and 2 on u2
u1 = np.array([1, -1]) / np.sqrt(2)
u2 = np.array([1, 1]) / np.sqrt(2)

pi_tangle_w = 4 / 9 * (np.sqrt(5) - 1)


def bell_density():
    return DensityMatrix.from_state(StateVector(np.array([1, 0, 0, 1]) / np.sqrt(2)))


def product_density(*labels):
    """ Density matrix of a product state given as ``from_label`` characters, e.g. ``product_density('0', '+')``. """
    return DensityMatrix.from_state(StateVector.from_label(''.join(labels)))


def random_density(rng, num_qubits, rank=None):
    dimension = 2 ** num_qubits
    rank = rank or dimension
    factor = rng.normal(size=(dimension, rank)) + 1j * rng.normal(size=(dimension, rank))
    matrix = factor @ factor.conj().T
    return DensityMatrix(matrix / np.trace(matrix).real)
