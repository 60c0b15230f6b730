'''Krylov block construction for the monomial, Newton and Chebyshev
polynomial bases, plus the warm-up Ritz pass that supplies their parameters'''
import math

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from dense_kernels import UNIT_ROUNDOFF
from models.basis_kind import BasisKind
from models.csr_matrix import CsrMatrix
from models.preconditioner import Preconditioner
from models.ritz_set import RitzSet
from sparse_io import apply_preconditioner_inverse

MAX_RITZ_BLOCK = 64

def as_operator(A) -> LinearOperator:
    if isinstance(A, CsrMatrix):
        return aslinearoperator(A.matrix)
    return aslinearoperator(A)

def preconditioned_operator(A, M_L: Preconditioner, M_R: Preconditioner) -> LinearOperator:
    '''x -> M_L^{-1} A M_R^{-1} x'''
    A_op = as_operator(A)
    if M_L.is_identity and M_R.is_identity:
        return A_op

    def apply(x):
        return apply_preconditioner_inverse(M_L, A_op @ apply_preconditioner_inverse(M_R, x))

    return LinearOperator(A_op.shape, matvec=apply, matmat=apply, dtype=np.float64)

def compute_ritz_values(A, M_L: Preconditioner, M_R: Preconditioner, r: np.ndarray, s: int) -> RitzSet:
    '''eigenvalues of the s x s Hessenberg matrix of s standard Arnoldi steps

    an early breakdown leaves a smaller block, its Ritz values are padded by
    repeating the last one (its real part when complex)'''
    op = preconditioned_operator(A, M_L, M_R)
    n = op.shape[0]
    if not 1 <= s <= min(n, MAX_RITZ_BLOCK):
        raise ValueError(f"Ritz block size must be in 1..{min(n, MAX_RITZ_BLOCK)}, got {s}")
    beta = np.linalg.norm(r)
    if beta == 0:
        raise ValueError("warm-up Arnoldi needs a nonzero start vector")

    Q = np.zeros((n, s + 1), order="F")
    H = np.zeros((s + 1, s), order="F")
    Q[:, 0] = r / beta
    k = s
    for j in range(s):
        w = op.matvec(Q[:, j])
        w_norm = np.linalg.norm(w)
        # classical Gram-Schmidt applied twice
        for _ in range(2):
            h = Q[:, :j + 1].T @ w
            w = w - Q[:, :j + 1] @ h
            H[:j + 1, j] += h
        H[j + 1, j] = np.linalg.norm(w)
        if H[j + 1, j] <= n * UNIT_ROUNDOFF * w_norm:
            k = j + 1
            break
        Q[:, j + 1] = w / H[j + 1, j]

    # LAPACK reduces to Hessenberg form and runs Francis double-shift QR
    values = scipy.linalg.eigvals(H[:k, :k])
    if k < s:
        last = values[-1] if values[-1].imag == 0 else complex(values[-1].real, 0.0)
        values = np.concatenate([values, np.full(s - k, last)])
    return RitzSet(values)

def leja_order(values) -> np.ndarray:
    '''greedy Leja ordering that keeps conjugate pairs adjacent

    the first value has the largest modulus, each next one maximizes the product
    of distances to those already chosen; ties go to the larger (real, imag)'''
    remaining = [complex(z) for z in np.asarray(values, dtype=np.complex128)]
    if not remaining:
        raise ValueError("leja_order needs at least one value")
    ordered = list()

    def take(index: int):
        z = remaining.pop(index)
        ordered.append(z)
        if z.imag != 0 and remaining:
            partner = min(range(len(remaining)), key=lambda k: abs(remaining[k] - z.conjugate()))
            ordered.append(remaining.pop(partner))

    take(max(range(len(remaining)), key=lambda k: (abs(remaining[k]), remaining[k].real, remaining[k].imag)))
    while remaining:
        chosen = np.array(ordered)

        def key(k: int):
            with np.errstate(divide="ignore"):
                log_product = float(np.sum(np.log(np.abs(remaining[k] - chosen))))
            return log_product, remaining[k].real, remaining[k].imag

        take(max(range(len(remaining)), key=key))
    return np.array(ordered)

def chebyshev_params(ritz: RitzSet) -> tuple:
    '''center d and focal distance c of the ellipse enclosing the Ritz values

    c == 0 flags a degenerate ellipse, the caller falls back to monomial'''
    re = ritz.real
    d = (re.max() + re.min()) / 2
    a = (re.max() - re.min()) / 2
    b = np.abs(ritz.imag).max()
    c = math.sqrt(a * a - b * b) if a >= b else a
    return float(d), float(c)

def basis_from_ritz(name: str, ritz: RitzSet) -> BasisKind:
    '''BasisKind of the requested family with parameters taken from ritz'''
    if name == "newton":
        return BasisKind.newton(leja_order(ritz.values))
    if name == "chebyshev":
        d, c = chebyshev_params(ritz)
        if c == 0:
            return BasisKind.monomial()
        return BasisKind.chebyshev(d, c)
    return BasisKind.monomial()

def recurrence_plan(kind: BasisKind, s: int) -> list:
    '''(factor, shift, previous) per new column j = 1..s-1 so that

        t_j = factor * (op - shift I) t_{j-1} + previous * t_{j-2}'''
    if kind.name == "chebyshev" and kind.focal == 0:
        kind = BasisKind.monomial()
    plan = list()
    if kind.name == "monomial":
        return [(1.0, 0.0, 0.0)] * (s - 1)
    if kind.name == "chebyshev":
        for j in range(1, s):
            if j == 1:
                plan.append((1.0 / kind.focal, kind.center, 0.0))
            else:
                plan.append((2.0 / kind.focal, kind.center, -1.0))
        return plan

    # Newton: a conjugate pair (theta, conj(theta)) is applied as the real
    # quadratic (op - Re theta)^2 + (Im theta)^2 spread over two columns
    shifts = kind.shifts
    k = 0
    while len(plan) < s - 1:
        theta = shifts[k % len(shifts)]
        if theta.imag == 0:
            plan.append((1.0, theta.real, 0.0))
            k += 1
            continue
        plan.append((1.0, theta.real, 0.0))
        if len(plan) < s - 1:
            plan.append((1.0, theta.real, theta.imag ** 2))
        k += 2
    return plan

def build_krylov_block(op, v: np.ndarray, s: int, kind: BasisKind, normalize: bool = True) -> np.ndarray:
    '''n x s block [p_0(op) v, ..., p_{s-1}(op) v] with p_0 = 1

    with normalize every generated column is divided by its 2-norm before the
    next step, which only changes the column scaling of the block. A column
    that comes out exactly zero ends the block early (invariant subspace)'''
    op = as_operator(op)
    v = np.asarray(v, dtype=np.float64)
    if s < 1:
        raise ValueError("block size must be at least 1")
    if not np.any(v):
        raise ValueError("Krylov start vector must be nonzero")

    K = np.zeros((len(v), s), order="F")
    K[:, 0] = v
    # eta_{j-1} / eta_j, the scale ratio of the two newest columns
    ratio = 1.0
    fixed_scale = kind.scale if kind.name == "chebyshev" else 1.0
    for j, (factor, shift, previous) in enumerate(recurrence_plan(kind, s), start=1):
        q = K[:, j - 1]
        w = op.matvec(q)
        if shift != 0:
            w = w - shift * q
        if factor != 1:
            w = factor * w
        if previous != 0:
            w = w + (previous * ratio) * K[:, j - 2]
        if not np.all(np.isfinite(w)):
            raise FloatingPointError(f"non-finite entry in Krylov column {j}")

        norm = np.linalg.norm(w)
        if norm == 0:
            return np.asfortranarray(K[:, :j])
        rho = norm if normalize else fixed_scale
        K[:, j] = w / rho
        ratio = 1.0 / rho
    return K
