from models.solve_result import SolveResult, SolveStatus
import pandas as pd

def format_value(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, float):
        return f"{value:.6e}"
    return str(value)

def key_dimension_pair(result: SolveResult) -> tuple:
    '''(Krylov columns, backward error) where the key dimension stopped the run'''
    if result.status is not SolveStatus.KEY_DIMENSION_REACHED or not result.records:
        return None, None
    last = result.records[-1]
    return last.inner_cols, last.backward_error

def summarize(result: SolveResult) -> pd.DataFrame:
    '''one-column table of the headline numbers of a solve'''
    key_cols, key_error = key_dimension_pair(result)
    values = {
        "status": result.status.value,
        "final backward error": result.backward_error,
        "min backward error": result.min_backward_error(),
        "block steps": result.outer_iterations,
        "Krylov columns": result.inner_columns,
        "restarts": result.restarts,
        "max cond_B_tilde": result.max_cond_b_tilde(),
        "key dimension p": key_cols,
        "backward error at p": key_error,
    }
    return pd.DataFrame({"value": {key: format_value(v) for key, v in values.items()}})

def print_summary(result: SolveResult, title: str = None):
    print("=====================================================================")
    if title:
        print(f"Problem:  {title}")
    print(summarize(result))
    if result.counters:
        print("+++++++++++++++++++++++++++++++++++++++++++++++++++++++++++++++++++++")
        print(pd.DataFrame({"count": result.counters}))
    print("=====================================================================")
