import numpy as np
from scipy import sparse

class CsrMatrix:
    '''square sparse operator in compressed sparse row storage

    immutable after construction, the scipy matrix built from the arrays is
    reused by every product'''
    def __init__(self, n: int, row_ptr, col_idx, values, symmetric: bool = False):
        self.n = int(n)
        self.row_ptr = np.ascontiguousarray(row_ptr, dtype=np.int64)
        self.col_idx = np.ascontiguousarray(col_idx, dtype=np.int64)
        self.values = np.ascontiguousarray(values, dtype=np.float64)
        # symmetric storage flag of the source file, the arrays are always general
        self.symmetric = symmetric
        self.check_structure()

        for arr in (self.row_ptr, self.col_idx, self.values):
            arr.setflags(write=False)
        self._matrix = sparse.csr_matrix(
            (self.values, self.col_idx, self.row_ptr), shape=(self.n, self.n)
        )

    def check_structure(self):
        '''validate the CSR invariants'''
        if self.row_ptr.shape != (self.n + 1,):
            raise ValueError(f"row_ptr must have length n + 1 = {self.n + 1}")
        if self.row_ptr[0] != 0 or self.row_ptr[-1] != len(self.values):
            raise ValueError("row_ptr must start at 0 and end at nnz")
        if np.any(np.diff(self.row_ptr) < 0):
            raise ValueError("row_ptr must be nondecreasing")
        if len(self.col_idx) != len(self.values):
            raise ValueError("col_idx and values must have the same length")
        if len(self.col_idx) and (self.col_idx.min() < 0 or self.col_idx.max() >= self.n):
            raise ValueError("column index out of range")
        for i in range(self.n):
            cols = self.col_idx[self.row_ptr[i]:self.row_ptr[i + 1]]
            if np.any(np.diff(cols) <= 0):
                raise ValueError(f"column indices of row {i} are not strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("matrix values must be finite")

    @classmethod
    def from_scipy(cls, matrix, symmetric: bool = False) -> 'CsrMatrix':
        csr = sparse.csr_matrix(matrix, dtype=np.float64)
        csr.sum_duplicates()
        csr.sort_indices()
        if csr.shape[0] != csr.shape[1]:
            raise ValueError("operator must be square")
        return cls(csr.shape[0], csr.indptr, csr.indices, csr.data, symmetric)

    @classmethod
    def from_dense(cls, M: np.ndarray) -> 'CsrMatrix':
        '''keep every entry, zeros included, so the pattern is fully dense'''
        M = np.asarray(M, dtype=np.float64)
        n = M.shape[0]
        if M.shape != (n, n):
            raise ValueError("operator must be square")
        row_ptr = np.arange(n + 1, dtype=np.int64) * n
        col_idx = np.tile(np.arange(n, dtype=np.int64), n)
        return cls(n, row_ptr, col_idx, M.reshape(-1))

    @property
    def nnz(self) -> int:
        return len(self.values)

    @property
    def matrix(self) -> sparse.csr_matrix:
        return self._matrix

    def diagonal(self) -> np.ndarray:
        return self._matrix.diagonal()

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def to_dense(self) -> np.ndarray:
        return np.asfortranarray(self._matrix.toarray())

    def is_symmetric(self) -> bool:
        '''entrywise A == A^T'''
        return (self._matrix != self._matrix.T).nnz == 0
