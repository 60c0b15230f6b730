import os, time
from dataclasses import replace

import pandas as pd
import psutil

import sstep_gmres
from models.solve_result import SolveResult
from models.solver_config import SolverConfig
from problems import Problem

# the three solver set-ups compared in the block size experiments
VARIANTS = {
    "classical": dict(variant="classical", check_key_dimension=False),
    "modified+H": dict(variant="modified", check_key_dimension=True),
    "classical+H": dict(variant="classical", check_key_dimension=True),
}

SWEEP_COLUMNS = [
    "problem", "variant", "s", "status", "final_backward_error", "min_backward_error",
    "block_steps", "krylov_columns", "cpu_time", "memory_kib", "elapsed",
]

def monitor_resources(func, *args, **kwargs):
    """Monitors CPU and RAM usage while running a function."""
    process = psutil.Process()
    start_time = time.time()
    initial_memory = process.memory_info().rss
    initial_cpu_times = process.cpu_times()

    result = func(*args, **kwargs)

    final_cpu_times = process.cpu_times()
    cpu_time_used = sum([final_cpu_times.user - initial_cpu_times.user,
                         final_cpu_times.system - initial_cpu_times.system])
    memory_usage = (process.memory_info().rss - initial_memory) / 1024
    elapsed_time = time.time() - start_time

    return cpu_time_used, memory_usage, elapsed_time, result

def run_variant(problem: Problem, variant: str, s: int, base: SolverConfig = None) -> dict:
    '''one solve of problem with a named variant, as a sweep row'''
    cfg = replace(base or SolverConfig(), s=s, **VARIANTS[variant])
    cpu, memory, elapsed, result = monitor_resources(sstep_gmres.solve, problem.A, problem.b, None, cfg)
    return {
        "problem": problem.name,
        "variant": variant,
        "s": s,
        "status": result.status.value,
        "final_backward_error": result.backward_error,
        "min_backward_error": result.min_backward_error(),
        "block_steps": result.outer_iterations,
        "krylov_columns": result.inner_columns,
        "cpu_time": cpu,
        "memory_kib": memory,
        "elapsed": elapsed,
    }

def run_variant_sweep(problem: Problem, s_values: list, base: SolverConfig = None, variants: list = None) -> pd.DataFrame:
    '''every variant for every block size'''
    rows = list()
    for s in s_values:
        for variant in variants or VARIANTS:
            row = run_variant(problem, variant, s, base)
            if base is not None and base.verbose:
                print(f"Sweep | {problem.name} | {variant} | s={s} | {row['status']} | backward error: {row['final_backward_error']}")
            rows.append(row)
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)

def sweep_block_sizes(problem: Problem, s_values: list, variant: str = "modified+H", base: SolverConfig = None) -> pd.DataFrame:
    '''backward error and iteration counts against s for one variant'''
    df = run_variant_sweep(problem, s_values, base, [variant])
    return df[["s", "final_backward_error", "min_backward_error", "block_steps", "krylov_columns"]].reset_index(drop=True)

def history_frame(result: SolveResult) -> pd.DataFrame:
    '''per-block-step records of a solve as a table'''
    return pd.DataFrame([vars(r) for r in result.records])

def save_sweep_csv(df: pd.DataFrame, path: str):
    folder = os.path.dirname(path)
    # check if dir exists else create one
    if folder and not os.path.exists(folder):
        os.makedirs(folder)
    df.to_csv(path, index=False)
