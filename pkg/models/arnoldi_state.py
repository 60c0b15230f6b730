import numpy as np
from models.qr_state import QrState

class ArnoldiState:
    '''bases of the s-step Arnoldi process and the QR state of [r | W]

    V = vr_state.Q and R = vr_state.T, so that [r | W] = V R'''
    def __init__(self, r: np.ndarray, s: int, variant: str = "classical"):
        if variant not in ("classical", "modified"):
            raise ValueError(f"unknown Arnoldi variant {variant!r}")
        n = len(r)
        self.r = r
        self.beta = float(np.linalg.norm(r))
        self.s = s
        self.variant = variant

        self.B = np.zeros((n, 0), order="F")
        self.Z = np.zeros((n, 0), order="F")
        self.W = np.zeros((n, 0), order="F")
        self.vr_state = QrState(n)

        # number of completed block steps and the width of the newest one
        self.steps = 0
        self.last_width = 0
        self.breakdown = False
        self.breakdown_column = None
        # condition number of the discarded S factor of the modified process
        self.last_s_factor_cond = None
        self.counters = {"projections": 0, "intra_qr": 0, "spmv": 0}

    @property
    def V(self) -> np.ndarray:
        return self.vr_state.Q

    @property
    def R(self) -> np.ndarray:
        return self.vr_state.T

    @property
    def p(self) -> int:
        '''number of Krylov columns generated so far'''
        return self.W.shape[1]

    def append_block(self, B_block: np.ndarray, Z_block: np.ndarray, W_block: np.ndarray):
        self.B = np.asfortranarray(np.hstack([self.B, B_block]))
        self.Z = np.asfortranarray(np.hstack([self.Z, Z_block]))
        self.W = np.asfortranarray(np.hstack([self.W, W_block]))
        self.last_width = B_block.shape[1]

    def factorization_residual(self) -> float:
        '''relative ||[r | W] - V R||_F'''
        rw = np.hstack([self.r[:, None], self.W])
        denom = np.linalg.norm(rw)
        if denom == 0:
            return 0.0
        return float(np.linalg.norm(rw - self.V @ self.R) / denom)
