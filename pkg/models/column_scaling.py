import numpy as np

class ColumnScaling:
    '''the diagonal D of a column normalization M = M_tilde @ diag(d)'''
    def __init__(self, d: np.ndarray):
        d = np.asarray(d, dtype=np.float64)
        if np.any(d <= 0):
            raise ValueError("column scaling entries must be strictly positive")
        self.d = d

    def apply(self, M_tilde: np.ndarray) -> np.ndarray:
        return M_tilde * self.d
