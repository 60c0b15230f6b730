'''test problems: the randsvd systems, diagonal systems and the downloadable
Matrix Market collection'''
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from models.csr_matrix import CsrMatrix
from models.randsvd_spec import RandSvdSpec
from sparse_io import gen_randsvd, load_matrix_market, right_singular_vector

MATRIX_DIR = Path(__file__).resolve().parent / "data" / "matrices"

# dimension and 2-norm condition number of each collection matrix
TABLE1 = {
    "494_bus": (494, 2.42e6),
    "fs1836": (183, 1.74e11),
    "sherman2": (1080, 9.64e11),
}

@dataclass
class Problem:
    name: str
    A: CsrMatrix
    b: np.ndarray
    # right singular vectors of randsvd matrices
    V: np.ndarray = None

    @property
    def n(self) -> int:
        return self.A.n

def build_rhs(text: str, n: int, V: np.ndarray = None) -> np.ndarray:
    '''right-hand side from "ones", "file:PATH" or "rsv:k"'''
    if text == "ones":
        return np.ones(n)
    if text.startswith("file:"):
        b = np.loadtxt(text[len("file:"):], dtype=np.float64, ndmin=1)
        if b.shape != (n,):
            raise ValueError(f"right-hand side file holds {b.size} values, expected {n}")
        return b
    if text.startswith("rsv:"):
        if V is None:
            raise ValueError("rsv:k needs a randsvd problem")
        return right_singular_vector(V, int(text[len("rsv:"):]))
    raise ValueError(f"unknown right-hand side {text!r}")

def randsvd_problem(spec: RandSvdSpec, rhs: str = "ones") -> Problem:
    A, V = gen_randsvd(spec)
    return Problem(f"randsvd({spec.n},{spec.kappa:g},{spec.mode},{spec.seed})", CsrMatrix.from_dense(A), build_rhs(rhs, spec.n, V), V)

def example_one(seed: int = 1, k: int = 4) -> Problem:
    '''20 x 20 randsvd with kappa 1e5 (one small cluster), b the k-th right singular vector'''
    return randsvd_problem(RandSvdSpec(20, 1e5, 1, seed), f"rsv:{k}")

def diagonal_problem(n: int, b: np.ndarray = None) -> Problem:
    '''A = diag(1..n), b = ones unless given'''
    A = CsrMatrix.from_scipy(np.diag(np.arange(1.0, n + 1)))
    return Problem(f"diag(1..{n})", A, np.ones(n) if b is None else np.asarray(b, dtype=np.float64))

def table1_path(name: str) -> Path:
    return MATRIX_DIR / f"{name}.mtx"

def available_table1() -> list:
    return [name for name in TABLE1 if table1_path(name).exists()]

def table1_problem(name: str) -> Problem:
    '''collection matrix with b = ones, FileNotFoundError when not downloaded'''
    if name not in TABLE1:
        raise KeyError(f"unknown collection matrix {name!r}, expected one of {sorted(TABLE1)}")
    path = table1_path(name)
    if not path.exists():
        raise FileNotFoundError(f"{path} is missing, see data/matrices/README.md")
    A = load_matrix_market(path)
    return Problem(name, A, np.ones(A.n))

def regression_suite(seed: int = 1) -> list:
    '''downloaded collection matrices plus a randsvd set over conditioning and modes'''
    problems = [table1_problem(name) for name in available_table1()]
    for kappa, mode in ((1e2, 3), (1e5, 1), (1e8, 3), (1e10, 5)):
        problems.append(randsvd_problem(RandSvdSpec(40, kappa, mode, seed)))
    return problems
