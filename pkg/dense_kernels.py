'''dense kernels: column-major blocks, Householder QR, Givens rotations,
one-sided Jacobi singular values, column scaling and condition numbers'''
import math

import numpy as np
from scipy.linalg import lapack

from errors import DimensionError, RankDeficiencyError, SvdNotConvergedError, ZeroColumnError
from models.column_scaling import ColumnScaling
from models.givens_rotation import GivensRotation

UNIT_ROUNDOFF = np.finfo(np.float64).eps / 2

def as_dense(M) -> np.ndarray:
    '''float64 column-major copy of M, rejecting NaN and Inf'''
    M = np.array(M, dtype=np.float64, order="F", ndmin=2)
    if not np.all(np.isfinite(M)):
        raise ValueError("dense matrix has non-finite entries")
    return M

def householder_qr(M: np.ndarray, check_rank: bool = False) -> tuple:
    '''thin QR by Householder reflections with a nonnegative diagonal of R

    with check_rank the first column whose pivot falls below u * ||M||_F raises
    RankDeficiencyError, the computed factors ride along on the exception'''
    M = np.asarray(M, dtype=np.float64)
    rows, cols = M.shape
    if rows < cols:
        raise DimensionError(f"householder_qr needs rows >= cols, got {rows}x{cols}")
    if cols == 0:
        return np.zeros((rows, 0), order="F"), np.zeros((0, 0), order="F")

    if cols == 1:
        # a single reflection is just a normalization
        norm = np.linalg.norm(M[:, 0])
        Q = np.zeros((rows, 1), order="F")
        if norm > 0:
            Q[:, 0] = M[:, 0] / norm
        else:
            Q[0, 0] = 1.0
        R = np.array([[norm]], order="F")
    else:
        Q, R = np.linalg.qr(M, mode="reduced")
        signs = np.where(np.diag(R) < 0, -1.0, 1.0)
        Q = np.asfortranarray(Q * signs)
        R = np.asfortranarray(R * signs[:, None])

    if check_rank:
        bad = np.flatnonzero(np.abs(np.diag(R)) <= UNIT_ROUNDOFF * np.linalg.norm(M))
        if len(bad):
            raise RankDeficiencyError(int(bad[0]), Q=Q, R=R)
    return Q, R

def compute_givens(a: float, b: float, row: int = 0) -> GivensRotation:
    '''rotation taking (a, b) to (sqrt(a^2 + b^2), 0)'''
    r = math.hypot(a, b)
    if r == 0:
        return GivensRotation(1.0, 0.0, row)
    return GivensRotation(a / r, b / r, row)

def jacobi_svd_values(M: np.ndarray) -> np.ndarray:
    '''singular values in descending order by LAPACK's preconditioned one-sided
    Jacobi SVD (dgejsv)

    mode "C" keeps high relative accuracy whenever M is a well-conditioned
    matrix times a column scaling, which is how the Krylov bases are measured.
    No singular vectors are formed and tiny entries are not perturbed, so an
    exactly rank-deficient M keeps its zero singular values'''
    M = np.asarray(M, dtype=np.float64)
    rows, cols = M.shape
    if rows < cols:
        raise DimensionError(f"jacobi_svd_values needs rows >= cols, got {rows}x{cols}")
    if cols == 0:
        return np.zeros(0)
    if not M.any():
        return np.zeros(cols)

    sva, _, _, work, _, info = lapack.dgejsv(M, joba=0, jobu=3, jobv=3, jobp=0)
    if info < 0:
        raise ValueError(f"dgejsv rejected argument {-info}")
    # work[0] / work[1] undoes the internal scaling against overflow
    values = np.sort((work[0] / work[1]) * sva[:cols])[::-1]
    if info > 0:
        raise SvdNotConvergedError(info, values)
    return values

def cond2(M: np.ndarray) -> float:
    '''2-norm condition number sigma_max / sigma_min, inf when sigma_min is zero'''
    values = jacobi_svd_values(M)
    if len(values) == 0 or values[0] == 0:
        raise ValueError("cond2 of a zero matrix is undefined")
    if values[-1] == 0:
        return math.inf
    return float(values[0] / values[-1])

def normalize_columns(M: np.ndarray) -> tuple:
    '''split M into unit-norm columns M_tilde and their norms D'''
    M = np.asarray(M, dtype=np.float64)
    norms = np.linalg.norm(M, axis=0)
    zero = np.flatnonzero(norms == 0)
    if len(zero):
        raise ZeroColumnError(int(zero[0]))
    return np.asfortranarray(M / norms), ColumnScaling(norms)
