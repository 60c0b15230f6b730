'''stability measurements taken after each block step and the diagnostics CSV'''
import csv
import io
import math

import numpy as np
import pandas as pd
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg

from block_orth import loss_of_orthogonality
from dense_kernels import cond2, normalize_columns
from errors import SvdNotConvergedError, ZeroColumnError
from models.arnoldi_state import ArnoldiState
from models.csr_matrix import CsrMatrix
from models.iteration_record import CSV_COLUMNS, IterationRecord
from models.ls_state import LsState
from poly_basis import as_operator

FLOAT_FIELDS = (
    "backward_error",
    "ls_residual_estimate",
    "cond_B_tilde",
    "cond_B_subblock",
    "cond_V",
    "ortho_loss_V",
)
INT_FIELDS = ("outer", "inner_cols", "restart_cycle")

def frobenius_norm(A) -> float:
    if isinstance(A, CsrMatrix):
        return A.frobenius_norm()
    if sparse.issparse(A):
        return float(sparse_linalg.norm(A))
    return float(np.linalg.norm(np.asarray(A)))

def backward_error(A, x: np.ndarray, b: np.ndarray, a_fro: float = None) -> float:
    '''||b - A x|| / (||b|| + ||A||_F ||x||)'''
    if a_fro is None:
        a_fro = frobenius_norm(A)
    residual = np.linalg.norm(b - as_operator(A) @ x)
    denominator = np.linalg.norm(b) + a_fro * np.linalg.norm(x)
    if denominator == 0:
        return 0.0 if residual == 0 else math.inf
    return float(residual / denominator)

def normalized_cond(M: np.ndarray) -> float:
    '''cond2 of M after scaling its columns to unit norm, None when undefined'''
    if M.shape[1] == 0:
        return None
    try:
        M_tilde, _ = normalize_columns(M)
        return cond2(M_tilde)
    except (ZeroColumnError, SvdNotConvergedError, ValueError):
        return None

def _cond(M: np.ndarray) -> float:
    try:
        return cond2(M)
    except (SvdNotConvergedError, ValueError):
        return None

def measure(state: ArnoldiState, ls: LsState, provisional_x: np.ndarray, A, b: np.ndarray,
            a_fro: float = None, outer: int = 0, restart_cycle: int = 0,
            conditioning: bool = True) -> IterationRecord:
    '''record of one block step

    the backward error is measured only when a provisional x is given and the
    condition numbers only with conditioning, failed SVDs leave None behind'''
    record = IterationRecord(outer=outer, inner_cols=state.p, restart_cycle=restart_cycle)
    record.ls_residual_estimate = ls.residual_estimate
    if provisional_x is not None:
        record.backward_error = backward_error(A, provisional_x, b, a_fro)

    if conditioning and state.p > 0:
        record.cond_B_tilde = normalized_cond(state.B)
        record.cond_B_subblock = normalized_cond(state.B[:, state.p - max(state.last_width, 1):])
        record.cond_V = _cond(state.V)
        record.ortho_loss_V = loss_of_orthogonality(state.V)
    return record

def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)

def _is_binary(sink) -> bool:
    return isinstance(sink, (io.RawIOBase, io.BufferedIOBase)) or "b" in getattr(sink, "mode", "")

def write_csv(records: list, sink):
    '''header plus one row per record, floats in shortest round-trip form and
    missing values as empty fields'''
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow([_format(value) for value in record.as_row()])
    text = buffer.getvalue()
    sink.write(text.encode("utf-8") if _is_binary(sink) else text)

def read_csv(source) -> list:
    '''parse a diagnostics CSV back into IterationRecords, floats bit-exact'''
    df = pd.read_csv(source, float_precision="round_trip", dtype={"stop_reason": "string"})
    if list(df.columns) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {list(df.columns)}")

    records = list()
    for row in df.to_dict(orient="records"):
        values = dict()
        for name in INT_FIELDS:
            values[name] = int(row[name])
        for name in FLOAT_FIELDS:
            values[name] = None if pd.isna(row[name]) else float(row[name])
        values["stop_reason"] = None if pd.isna(row["stop_reason"]) else str(row["stop_reason"])
        records.append(IterationRecord(**values))
    return records
