import numpy as np

class QrState:
    '''growing factorization X = Q T, extended one column block per step'''
    def __init__(self, n: int):
        self.Q = np.zeros((n, 0), order="F")
        self.T = np.zeros((0, 0), order="F")
        # widths of the column blocks appended so far
        self.blocks: list[int] = list()

    @property
    def cols(self) -> int:
        return self.Q.shape[1]

    def block_ranges(self) -> list:
        '''(start, stop) column range of every committed block'''
        ranges = list()
        start = 0
        for width in self.blocks:
            ranges.append((start, start + width))
            start += width
        return ranges

    def append(self, Q_new: np.ndarray, T_offdiag: np.ndarray, T_diag: np.ndarray):
        '''extend Q by Q_new and T by the column block [T_offdiag; T_diag]'''
        m = self.cols
        k = Q_new.shape[1]
        T = np.zeros((m + k, m + k), order="F")
        T[:m, :m] = self.T
        T[:m, m:] = T_offdiag
        T[m:, m:] = T_diag
        self.T = T
        self.Q = np.asfortranarray(np.hstack([self.Q, Q_new]))
        self.blocks.append(k)

    def truncate(self, m: int):
        '''keep the first m columns of Q and the leading m x m block of T'''
        if m >= self.cols:
            return
        self.Q = np.asfortranarray(self.Q[:, :m])
        self.T = np.asfortranarray(self.T[:m, :m])
        blocks = list()
        total = 0
        for width in self.blocks:
            if total + width >= m:
                blocks.append(m - total)
                break
            blocks.append(width)
            total += width
        self.blocks = [w for w in blocks if w > 0]
