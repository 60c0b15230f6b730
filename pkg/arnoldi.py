'''one block step of the classical and the modified s-step Arnoldi process

both maintain [r | W] = V R with Z = M_R^{-1} B and W = M_L^{-1} A Z. The
classical step takes B as the Krylov block itself, the modified step takes the
Q-factor of the Krylov block projected twice against the earlier basis'''
import numpy as np

from block_orth import orth_step, twice_projected_qr
from dense_kernels import cond2
from errors import RankDeficiencyError, SvdNotConvergedError
from models.arnoldi_state import ArnoldiState
from models.basis_kind import BasisKind
from models.preconditioner import Preconditioner
from poly_basis import as_operator, build_krylov_block, preconditioned_operator
from sparse_io import apply_preconditioner_inverse

def start(r: np.ndarray, s: int, variant: str = "classical") -> ArnoldiState:
    '''state seeded with V_1 = r / beta and R = [beta]'''
    r = np.asarray(r, dtype=np.float64)
    state = ArnoldiState(r, s, variant)
    if state.beta == 0:
        raise ValueError("Arnoldi needs a nonzero starting residual")
    state.vr_state.append((r / state.beta)[:, None], np.zeros((0, 1)), np.array([[state.beta]]))
    return state

def krylov_operator(A, M_L: Preconditioner, M_R: Preconditioner, which: str = "plain"):
    if which == "preconditioned":
        return preconditioned_operator(A, M_L, M_R)
    return as_operator(A)

def _krylov_block(state, A, M_L, M_R, kind, which, width) -> np.ndarray:
    K = build_krylov_block(krylov_operator(A, M_L, M_R, which), state.V[:, -1], width, kind)
    state.counters["spmv"] += K.shape[1] - 1
    return K

def _extend(state: ArnoldiState, B_block: np.ndarray, A, M_L, M_R, scheme: str) -> ArnoldiState:
    '''Z = M_R^{-1} B, W = M_L^{-1} A Z, then orthogonalize W into [r | W] = V R'''
    Z_block = np.asfortranarray(apply_preconditioner_inverse(M_R, B_block))
    W_block = np.asfortranarray(apply_preconditioner_inverse(M_L, as_operator(A).matmat(Z_block)))
    state.counters["spmv"] += B_block.shape[1]
    if not np.all(np.isfinite(W_block)):
        raise FloatingPointError(f"non-finite entries in block step {state.steps + 1}")

    state.append_block(B_block, Z_block, W_block)
    state.steps += 1
    try:
        orth_step(scheme, state.vr_state, W_block, state.counters)
    except RankDeficiencyError as exc:
        state.breakdown = True
        state.breakdown_column = exc.column
    return state

def classical_step(state: ArnoldiState, A, M_L: Preconditioner, M_R: Preconditioner, kind: BasisKind,
                   scheme: str = "bcgsi+", basis_operator: str = "plain", width: int = None) -> ArnoldiState:
    '''B <- K, the Krylov block grown from the newest Arnoldi vector'''
    K = _krylov_block(state, A, M_L, M_R, kind, basis_operator, width or state.s)
    return _extend(state, K, A, M_L, M_R, scheme)

def modified_step(state: ArnoldiState, A, M_L: Preconditioner, M_R: Preconditioner, kind: BasisKind,
                  scheme: str = "bcgsi+", basis_operator: str = "plain", width: int = None) -> ArnoldiState:
    '''B <- Q-factor of (I - V V^T)^2 K with V every Arnoldi vector but the newest

    the S factor is kept only for its condition number. A one-column K is the
    newest Arnoldi vector itself and is used as is'''
    K = _krylov_block(state, A, M_L, M_R, kind, basis_operator, width or state.s)
    if K.shape[1] == 1:
        state.last_s_factor_cond = 1.0
        return _extend(state, K, A, M_L, M_R, scheme)

    try:
        B, S = twice_projected_qr(state.V[:, :-1], K, state.counters)
    except RankDeficiencyError as exc:
        # the Krylov block closed an invariant subspace, keep its independent part
        keep = max(exc.column, 1)
        B, S = exc.Q[:, :keep], exc.R[:keep, :keep]

    try:
        state.last_s_factor_cond = cond2(S)
    except (SvdNotConvergedError, ValueError):
        state.last_s_factor_cond = None
    return _extend(state, np.asfortranarray(B), A, M_L, M_R, scheme)

def arnoldi_step(state: ArnoldiState, A, M_L, M_R, kind: BasisKind, scheme: str = "bcgsi+",
                 basis_operator: str = "plain", width: int = None) -> ArnoldiState:
    step = modified_step if state.variant == "modified" else classical_step
    return step(state, A, M_L, M_R, kind, scheme, basis_operator, width)

def happy_breakdown_truncate(state: ArnoldiState, col: int = None) -> ArnoldiState:
    '''cut everything after column col of [r | W], col itself is kept

    its R column carries the least-squares information of the dependent
    direction, so B, Z and W keep col columns and V keeps col + 1'''
    if col is None:
        return state
    state.breakdown = True
    state.breakdown_column = col
    if col + 1 >= state.vr_state.cols:
        return state

    dropped = state.p - col
    state.vr_state.truncate(col + 1)
    state.B = np.asfortranarray(state.B[:, :col])
    state.Z = np.asfortranarray(state.Z[:, :col])
    state.W = np.asfortranarray(state.W[:, :col])
    state.last_width = max(state.last_width - dropped, 0)
    return state
