'''sparse operator storage, Matrix Market reading and writing, spmv and the
randsvd test matrices'''
import io
import math

import numpy as np
from scipy import sparse

from dense_kernels import householder_qr
from errors import DimensionError, MatrixMarketError
from models.csr_matrix import CsrMatrix
from models.preconditioner import Preconditioner
from models.randsvd_spec import RandSvdSpec

BANNER = "%%matrixmarket"

def _text_lines(stream):
    '''(line number, decoded line) pairs of a byte or text stream'''
    for line_no, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise MatrixMarketError(line_no, f"invalid UTF-8 at byte {exc.start}") from None
        yield line_no, raw.rstrip("\r\n")

def parse_matrix_market(stream) -> CsrMatrix:
    '''read a coordinate real general/symmetric Matrix Market stream

    symmetric storage is expanded to both triangles, duplicates are summed and
    indices become 0-based'''
    lines = _text_lines(stream)

    line_no, header = next(lines, (1, ""))
    tokens = header.lower().split()
    if len(tokens) != 5 or tokens[0] != BANNER or tokens[1] != "matrix":
        raise MatrixMarketError(line_no, f"malformed header {header!r}")
    if tokens[2] != "coordinate":
        raise MatrixMarketError(line_no, f"unsupported format {tokens[2]!r}, only coordinate is read")
    if tokens[3] != "real":
        raise MatrixMarketError(line_no, f"unsupported field {tokens[3]!r}, only real is read")
    if tokens[4] not in ("general", "symmetric"):
        raise MatrixMarketError(line_no, f"unsupported symmetry {tokens[4]!r}")
    symmetric = tokens[4] == "symmetric"

    size = None
    read = 0
    rows, cols, vals = list(), list(), list()
    for line_no, line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        parts = stripped.split()
        if size is None:
            try:
                n_rows, n_cols, nnz = (int(p) for p in parts)
            except ValueError:
                raise MatrixMarketError(line_no, f"malformed size line {stripped!r}") from None
            if n_rows != n_cols:
                raise MatrixMarketError(line_no, f"matrix is {n_rows}x{n_cols}, the operator must be square")
            size = (n_rows, nnz)
            continue

        if len(parts) != 3:
            raise MatrixMarketError(line_no, f"expected 'row col value', got {stripped!r}")
        try:
            i, j, value = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise MatrixMarketError(line_no, f"malformed entry {stripped!r}") from None
        n = size[0]
        if not (1 <= i <= n and 1 <= j <= n):
            raise MatrixMarketError(line_no, f"index ({i}, {j}) outside the declared {n}x{n} bounds")
        if not math.isfinite(value):
            raise MatrixMarketError(line_no, f"non-finite value {parts[2]!r}")
        read += 1
        rows.append(i - 1)
        cols.append(j - 1)
        vals.append(value)
        if symmetric and i != j:
            rows.append(j - 1)
            cols.append(i - 1)
            vals.append(value)

    if size is None:
        raise MatrixMarketError(line_no, "missing size line")
    n, nnz = size
    if read != nnz:
        raise MatrixMarketError(line_no, f"declared {nnz} entries but read {read}")

    coo = sparse.coo_matrix((vals, (rows, cols)), shape=(n, n), dtype=np.float64)
    return CsrMatrix.from_scipy(coo.tocsr(), symmetric=symmetric)

def load_matrix_market(path) -> CsrMatrix:
    with open(path, "rb") as f:
        return parse_matrix_market(f)

def write_matrix_market(A: CsrMatrix, sink, symmetric: bool = False):
    '''write A as coordinate real, shortest round-trip decimals

    with symmetric only the lower triangle is written'''
    sink.write(f"%%MatrixMarket matrix coordinate real {'symmetric' if symmetric else 'general'}\n")
    entries = list()
    for i in range(A.n):
        for k in range(A.row_ptr[i], A.row_ptr[i + 1]):
            j = int(A.col_idx[k])
            if symmetric and j > i:
                continue
            entries.append((i, j, float(A.values[k])))
    # column-major entry order, as written by most Matrix Market tools
    entries.sort(key=lambda e: (e[1], e[0]))
    sink.write(f"{A.n} {A.n} {len(entries)}\n")
    for i, j, value in entries:
        sink.write(f"{i + 1} {j + 1} {value!r}\n")

def serialize_matrix_market(A: CsrMatrix, symmetric: bool = False) -> str:
    buffer = io.StringIO()
    write_matrix_market(A, buffer, symmetric)
    return buffer.getvalue()

def spmv(A: CsrMatrix, x: np.ndarray) -> np.ndarray:
    '''y = A x, each row accumulated left to right'''
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != A.n:
        raise DimensionError(f"spmv: vector of length {x.shape[0]} for an operator of size {A.n}")
    return A.matrix @ x

def apply_preconditioner_inverse(P: Preconditioner, x: np.ndarray) -> np.ndarray:
    if P.diagonal is not None and x.shape[0] != len(P.diagonal):
        raise DimensionError("preconditioner and vector lengths differ")
    return P.apply_inverse(x)

def jacobi_preconditioner(A: CsrMatrix) -> Preconditioner:
    return Preconditioner.jacobi(A.diagonal())

def randsvd_singular_values(spec: RandSvdSpec, rng: np.random.Generator = None) -> np.ndarray:
    '''singular values of the requested randsvd mode, in descending order'''
    n, kappa = spec.n, spec.kappa
    i = np.arange(n)
    if spec.mode == 1:
        sigma = np.full(n, 1.0 / kappa)
        sigma[0] = 1.0
    elif spec.mode == 2:
        sigma = np.ones(n)
        sigma[-1] = 1.0 / kappa
    elif spec.mode == 3:
        sigma = kappa ** (-i / (n - 1))
    elif spec.mode == 4:
        sigma = 1.0 - (1.0 - 1.0 / kappa) * i / (n - 1)
    else:
        rng = rng or np.random.default_rng(spec.seed)
        sigma = np.exp(rng.uniform(-math.log(kappa), 0.0, n))
    return np.sort(sigma)[::-1]

def gen_randsvd(spec: RandSvdSpec) -> tuple:
    '''A = U diag(sigma) V^T with U, V the Q factors of seeded Gaussian matrices

    numpy's PCG64 stream is drawn in the order sigma (mode 5 only), U, V'''
    rng = np.random.default_rng(spec.seed)
    sigma = randsvd_singular_values(spec, rng)
    U, _ = householder_qr(rng.standard_normal((spec.n, spec.n)))
    V, _ = householder_qr(rng.standard_normal((spec.n, spec.n)))
    A = np.asfortranarray((U * sigma) @ V.T)
    return A, V

def right_singular_vector(V: np.ndarray, k: int) -> np.ndarray:
    '''k-th (1-based) right singular vector, singular values sorted descending'''
    if not 1 <= k <= V.shape[1]:
        raise IndexError(f"singular vector index {k} outside 1..{V.shape[1]}")
    return np.array(V[:, k - 1])
