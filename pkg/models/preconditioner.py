import numpy as np

class Preconditioner:
    '''M_L or M_R of the solver, either the identity or a Jacobi diagonal'''
    def __init__(self, kind: str = "identity", diagonal: np.ndarray = None):
        if kind not in ("identity", "jacobi"):
            raise ValueError(f"unknown preconditioner kind {kind!r}")
        self.kind = kind
        self.diagonal = None
        if kind == "jacobi":
            diagonal = np.asarray(diagonal, dtype=np.float64)
            zero = np.flatnonzero(diagonal == 0)
            if len(zero):
                raise ValueError(f"jacobi preconditioner has a zero diagonal entry at row {zero[0]}")
            self.diagonal = diagonal

    @classmethod
    def identity(cls) -> 'Preconditioner':
        return cls("identity")

    @classmethod
    def jacobi(cls, diagonal) -> 'Preconditioner':
        return cls("jacobi", diagonal)

    @property
    def is_identity(self) -> bool:
        return self.kind == "identity"

    def apply_inverse(self, x: np.ndarray) -> np.ndarray:
        '''M^{-1} x for a vector or a block of columns'''
        if self.is_identity:
            return x
        if x.ndim == 1:
            return x / self.diagonal
        return x / self.diagonal[:, None]
