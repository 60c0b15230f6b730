from enum import Enum

import numpy as np

class SolveStatus(Enum):
    CONVERGED_BACKWARD = "converged_backward"
    CONVERGED_LS = "converged_ls"
    KEY_DIMENSION_REACHED = "key_dimension_reached"
    BREAKDOWN_CONVERGED = "breakdown_converged"
    MAX_ITERS = "max_iters"
    NONFINITE = "nonfinite"

    @property
    def converged(self) -> bool:
        return self in (SolveStatus.CONVERGED_BACKWARD, SolveStatus.CONVERGED_LS, SolveStatus.BREAKDOWN_CONVERGED)

class SolveResult:
    '''final iterate of a solve and the per-block-step history'''
    def __init__(self, x: np.ndarray, status: SolveStatus, records: list, outer_iterations: int,
                 backward_error: float = None, restarts: int = 0, counters: dict = None):
        self.x = x
        self.status = status
        self.records = records
        self.outer_iterations = outer_iterations
        self.backward_error = backward_error
        self.restarts = restarts
        self.counters = counters or dict()

    @property
    def inner_columns(self) -> int:
        return self.records[-1].inner_cols if self.records else 0

    def min_backward_error(self) -> float:
        values = [r.backward_error for r in self.records if r.backward_error is not None]
        return min(values) if values else None

    def max_cond_b_tilde(self) -> float:
        values = [r.cond_B_tilde for r in self.records if r.cond_B_tilde is not None]
        return max(values) if values else None
