'''block Gram-Schmidt schemes that extend a QR factorization X = Q T one block
of columns at a time'''
import numpy as np

from dense_kernels import UNIT_ROUNDOFF, householder_qr
from errors import DimensionError, RankDeficiencyError
from models.qr_state import QrState

SCHEMES = ("bcgsi+", "bmgs")

def _check_block(state: QrState, X_new: np.ndarray) -> np.ndarray:
    X = np.asarray(X_new, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] < 1:
        raise DimensionError("the new block needs at least one column")
    if X.shape[0] != state.Q.shape[0]:
        raise DimensionError(f"block has {X.shape[0]} rows, the basis has {state.Q.shape[0]}")
    return X

def _count(counters: dict, key: str, amount: int = 1):
    if counters is not None:
        counters[key] = counters.get(key, 0) + amount

def _commit(state: QrState, Q_new, T_offdiag, T_diag, threshold: float):
    '''append the block, then report the first pivot at or below threshold'''
    m = state.cols
    state.append(Q_new, T_offdiag, T_diag)
    bad = np.flatnonzero(np.abs(np.diag(T_diag)) <= threshold)
    if len(bad):
        raise RankDeficiencyError(m + int(bad[0]))
    return state

def bcgsi_plus_step(state: QrState, X_new: np.ndarray, counters: dict = None) -> QrState:
    '''one step of block classical Gram-Schmidt with reorthogonalization

    two projection passes, each followed by a Householder QR of the block:

        S1 = Q^T X,  W1 = X - Q S1,  W1 = U T1
        S2 = Q^T U,  W2 = U - Q S2,  W2 = Q_new T2

    and T grows by [S1 + S2 T1; T2 T1]. A diagonal entry of T2 T1 at or below
    u * ||X||_F raises RankDeficiencyError after the block is committed'''
    X = _check_block(state, X_new)
    Q = state.Q

    S1 = Q.T @ X
    W1 = X - Q @ S1
    U, T1 = householder_qr(W1)

    S2 = Q.T @ U
    W2 = U - Q @ S2
    Q_new, T2 = householder_qr(W2)

    if state.cols:
        _count(counters, "projections", 2)
    _count(counters, "intra_qr", 2)
    return _commit(state, Q_new, S1 + S2 @ T1, T2 @ T1, UNIT_ROUNDOFF * np.linalg.norm(X))

def bmgs_step(state: QrState, X_new: np.ndarray, counters: dict = None) -> QrState:
    '''one step of block modified Gram-Schmidt: the block is projected against
    every earlier block in turn, then factored by one Householder QR'''
    X = _check_block(state, X_new)
    W = np.array(X, order="F")
    S = np.zeros((state.cols, X.shape[1]), order="F")
    for start, stop in state.block_ranges():
        Q_j = state.Q[:, start:stop]
        S_j = Q_j.T @ W
        W -= Q_j @ S_j
        S[start:stop] = S_j
        _count(counters, "projections")

    Q_new, R_new = householder_qr(W)
    _count(counters, "intra_qr")
    return _commit(state, Q_new, S, R_new, UNIT_ROUNDOFF * np.linalg.norm(X))

def orth_step(scheme: str, state: QrState, X_new: np.ndarray, counters: dict = None) -> QrState:
    if scheme == "bcgsi+":
        return bcgsi_plus_step(state, X_new, counters)
    if scheme == "bmgs":
        return bmgs_step(state, X_new, counters)
    raise ValueError(f"unknown orthogonalization scheme {scheme!r}")

def twice_projected_qr(V: np.ndarray, K: np.ndarray, counters: dict = None) -> tuple:
    '''Q and R factors of (I - V V^T)^2 K, the projector applied as two passes

    raises RankDeficiencyError with the local column index when a pivot of
    the projected block falls to u * ||K||_F, Q and R ride along'''
    W = np.array(K, dtype=np.float64, order="F")
    if V.shape[1]:
        for _ in range(2):
            W -= V @ (V.T @ W)
        _count(counters, "projections", 2)
    Q, R = householder_qr(W)
    _count(counters, "intra_qr")
    bad = np.flatnonzero(np.abs(np.diag(R)) <= UNIT_ROUNDOFF * np.linalg.norm(K))
    if len(bad):
        raise RankDeficiencyError(int(bad[0]), Q=Q, R=R)
    return Q, R

def loss_of_orthogonality(Q: np.ndarray) -> float:
    '''||Q^T Q - I||_F'''
    Q = np.asarray(Q, dtype=np.float64)
    if Q.ndim != 2 or Q.shape[1] < 1:
        raise DimensionError("loss_of_orthogonality needs at least one column")
    return float(np.linalg.norm(Q.T @ Q - np.eye(Q.shape[1])))
