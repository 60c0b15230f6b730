from dataclasses import dataclass, fields

CSV_COLUMNS = [
    "outer",
    "inner_cols",
    "backward_error",
    "ls_residual_estimate",
    "cond_B_tilde",
    "cond_B_subblock",
    "cond_V",
    "ortho_loss_V",
    "stop_reason",
    "restart_cycle",
]

@dataclass
class IterationRecord:
    '''diagnostics measured after one block step, None marks a missing value'''
    outer: int
    inner_cols: int
    backward_error: float = None
    ls_residual_estimate: float = None
    cond_B_tilde: float = None
    cond_B_subblock: float = None
    cond_V: float = None
    ortho_loss_V: float = None
    stop_reason: str = None
    restart_cycle: int = 0

    def as_row(self) -> list:
        return [getattr(self, f.name) for f in fields(self)]
