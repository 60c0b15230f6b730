import numpy as np
import pytest
import scipy.linalg

from dense_kernels import householder_qr
from models.csr_matrix import CsrMatrix
from problems import diagonal_problem

@pytest.fixture
def rng():
    return np.random.default_rng(20240601)

@pytest.fixture
def diag20():
    return diagonal_problem(20)

def random_orthonormal(rng, rows, cols):
    Q, _ = householder_qr(rng.standard_normal((rows, cols)))
    return Q

def matrix_with_singular_values(rng, rows, sigma):
    '''rows x len(sigma) matrix with the given singular values'''
    U = random_orthonormal(rng, rows, len(sigma))
    V = random_orthonormal(rng, len(sigma), len(sigma))
    return np.asfortranarray((U * sigma) @ V.T)

def well_conditioned_operator(rng, n, spread=0.3):
    '''nonsymmetric CsrMatrix close to the identity plus a diagonal ramp'''
    M = np.diag(np.linspace(1.0, 2.0, n)) + spread / np.sqrt(n) * rng.standard_normal((n, n))
    return CsrMatrix.from_dense(M)

def max_principal_angle(X, Y) -> float:
    return float(np.max(scipy.linalg.subspace_angles(X, Y)))
