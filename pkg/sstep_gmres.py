'''s-step GMRES: Arnoldi block steps, the Givens least-squares update, the
three stopping criteria, restarts and solution formation'''
from dataclasses import dataclass

import numpy as np
import scipy.linalg

import arnoldi
from dense_kernels import UNIT_ROUNDOFF, compute_givens
from diagnostics import backward_error, frobenius_norm, measure
from errors import DimensionError, SingularTriangularError
from models.arnoldi_state import ArnoldiState
from models.basis_kind import BasisKind
from models.csr_matrix import CsrMatrix
from models.iteration_record import IterationRecord
from models.ls_state import LsState
from models.preconditioner import Preconditioner
from models.solve_result import SolveResult, SolveStatus
from models.solver_config import SolverConfig
from poly_basis import as_operator, basis_from_ritz, compute_ritz_values
from sparse_io import apply_preconditioner_inverse

@dataclass
class StopCheck:
    '''outcome of the stopping tests after one block step

    status None means keep iterating, x and backward_error are filled whenever
    a provisional solution was formed'''
    status: SolveStatus = None
    x: np.ndarray = None
    backward_error: float = None
    p: int = None

def givens_update(ls: LsState, H_new_cols: np.ndarray) -> LsState:
    '''extend the Givens QR of H by its next columns

    H_new_cols holds the new columns with all p_new + 1 rows. Earlier rotations
    are applied first, then one new rotation per column removes its subdiagonal'''
    H = np.array(H_new_cols, dtype=np.float64, order="F", ndmin=2)
    p = ls.p
    k = H.shape[1]
    p_new = p + k
    if H.shape[0] != p_new + 1:
        raise DimensionError(f"expected {p_new + 1} rows for columns {p}..{p_new - 1}, got {H.shape[0]}")

    for rotation in ls.chain:
        rotation.apply_to(H)
    g = np.concatenate([ls.g, np.zeros(k)])
    for j in range(k):
        col = p + j
        rotation = compute_givens(H[col, j], H[col + 1, j], row=col)
        rotation.apply_to(H[:, j:])
        H[col + 1, j] = 0.0
        rotation.apply_to(g)
        ls.chain.append(rotation)

    T = np.zeros((p_new, p_new), order="F")
    T[:p, :p] = ls.T
    T[:, p:] = H[:p_new, :]
    ls.T = T
    ls.g = g
    return ls

def form_solution(ls: LsState, Z: np.ndarray, x0: np.ndarray, p: int = None) -> np.ndarray:
    '''x0 + Z y with T y = g using the first p columns (all by default)'''
    p = ls.p if p is None else p
    if p == 0:
        return np.array(x0, dtype=np.float64)
    T = ls.T[:p, :p]
    bad = np.flatnonzero(np.abs(np.diag(T)) <= UNIT_ROUNDOFF * np.linalg.norm(T))
    if len(bad):
        raise SingularTriangularError(int(bad[0]))
    y = scipy.linalg.solve_triangular(T, ls.g[:p], lower=False)
    return x0 + Z[:, :p] @ y

def provisional_solution(ls: LsState, Z: np.ndarray, x0: np.ndarray, p: int = None) -> tuple:
    '''form_solution falling back to the columns before a singular pivot'''
    p = ls.p if p is None else p
    try:
        return form_solution(ls, Z, x0, p), p
    except SingularTriangularError as exc:
        return form_solution(ls, Z, x0, exc.column), exc.column

def key_dimension(state: ArnoldiState, tol_h: float, p_old: int = 0) -> int:
    '''first p > p_old with |R[p, p]| <= tol_h * ||W[:, :p]||_F, or None'''
    col_norms = np.cumsum(np.einsum("ij,ij->j", state.W, state.W))
    R = state.R
    for p in range(p_old + 1, state.p + 1):
        if abs(R[p, p]) <= tol_h * np.sqrt(col_norms[p - 1]):
            return p
    return None

def check_stop(ls: LsState, state: ArnoldiState, cfg: SolverConfig, A, b: np.ndarray, x0: np.ndarray,
               a_fro: float = None, p_old: int = 0, check_backward: bool = True) -> StopCheck:
    '''evaluate the stopping criteria after a block step, first hit wins

    a happy breakdown or the key dimension stop the run; the LS residual
    estimate only forces a backward-error check unless cfg.ls_advisory is off'''
    a_fro = frobenius_norm(A) if a_fro is None else a_fro

    def evaluate(p):
        x, p = provisional_solution(ls, state.Z, x0, p)
        return x, backward_error(A, x, b, a_fro), p

    if state.breakdown:
        x, error, p = evaluate(state.p)
        if error <= cfg.tol:
            return StopCheck(SolveStatus.BREAKDOWN_CONVERGED, x, error, p)

    if cfg.check_key_dimension:
        k = key_dimension(state, cfg.tol_h, p_old)
        if k is not None:
            x, error, p = evaluate(k)
            status = SolveStatus.CONVERGED_BACKWARD if error <= cfg.tol else SolveStatus.KEY_DIMENSION_REACHED
            return StopCheck(status, x, error, p)

    ls_met = ls.residual_estimate <= cfg.tol_ls * ls.beta
    if ls_met and not cfg.ls_advisory:
        x, error, p = evaluate(state.p)
        return StopCheck(SolveStatus.CONVERGED_LS, x, error, p)
    if ls_met or check_backward:
        x, error, p = evaluate(state.p)
        if error <= cfg.tol:
            return StopCheck(SolveStatus.CONVERGED_BACKWARD, x, error, p)
        return StopCheck(None, x, error, p)
    return StopCheck()

def build_preconditioners(A, cfg: SolverConfig) -> tuple:
    '''(M_L, M_R) for the configured preconditioner and side'''
    identity = Preconditioner.identity()
    if cfg.precond == "none":
        return identity, identity
    diagonal = A.diagonal() if isinstance(A, CsrMatrix) else np.diag(np.asarray(A))
    jacobi = Preconditioner.jacobi(diagonal)
    if cfg.precond_side == "left":
        return jacobi, identity
    return identity, jacobi

class SStepGMRES:
    '''one run of restarted s-step GMRES on A x = b

    a cycle holds at most cfg.restart Krylov columns (n without restart), the
    total number of block steps over all cycles is capped by cfg.max_outer'''
    def __init__(self, A, b: np.ndarray, cfg: SolverConfig):
        self.A = A
        self.op = as_operator(A)
        n = self.op.shape[0]
        self.b = np.asarray(b, dtype=np.float64)
        if self.b.shape != (n,):
            raise DimensionError(f"right-hand side has shape {self.b.shape}, the operator is {n}x{n}")
        self.n = n
        self.cfg = cfg.resolve(n)
        self.M_L, self.M_R = build_preconditioners(A, self.cfg)
        self.a_fro = frobenius_norm(A)
        self.cycle_cap = self.cfg.restart or n

        self.records: list[IterationRecord] = list()
        self.counters = {"projections": 0, "intra_qr": 0, "spmv": 0}
        self.outer = 0
        self.cycle = 0

        self.x0: np.ndarray = None
        self.kind: BasisKind = None
        self.state: ArnoldiState = None
        self.ls: LsState = None

    def log(self, message: str):
        if self.cfg.verbose:
            print(f"s-step GMRES | {message}")

    def choose_basis(self, r: np.ndarray) -> BasisKind:
        '''basis family for the cycle, Newton and Chebyshev parameters come
        from a warm-up Arnoldi pass on the operator the basis is built with'''
        if self.cfg.basis == "monomial":
            return BasisKind.monomial()
        if self.cfg.basis_operator == "preconditioned":
            M_L, M_R = self.M_L, self.M_R
        else:
            M_L = M_R = Preconditioner.identity()
        ritz = compute_ritz_values(self.A, M_L, M_R, r, self.cfg.s)
        self.counters["spmv"] += self.cfg.s
        kind = basis_from_ritz(self.cfg.basis, ritz)
        if kind.name != self.cfg.basis:
            self.log(f"cycle {self.cycle} | degenerate Chebyshev ellipse, using the monomial basis")
        return kind

    def start_cycle(self, x0: np.ndarray) -> bool:
        '''residual, basis and fresh Arnoldi/LS states for a cycle from x0

        returns False when x0 already solves the system exactly'''
        self.x0 = x0
        r = apply_preconditioner_inverse(self.M_L, self.b - self.op @ x0)
        if not np.all(np.isfinite(r)):
            raise FloatingPointError("non-finite initial residual")
        beta = np.linalg.norm(r)
        if beta == 0:
            return False
        self.kind = self.choose_basis(r)
        self.state = arnoldi.start(r, self.cfg.s, self.cfg.variant)
        self.ls = LsState(beta)
        return True

    def block_step(self) -> int:
        '''one Arnoldi block step plus the Givens update, returns the column
        count before the step'''
        state = self.state
        p_old = state.p
        width = min(self.cfg.s, self.cycle_cap - p_old)
        arnoldi.arnoldi_step(state, self.A, self.M_L, self.M_R, self.kind, self.cfg.scheme,
                             self.cfg.basis_operator, width)
        self.outer += 1
        if state.breakdown:
            arnoldi.happy_breakdown_truncate(state, state.breakdown_column)
            self.log(f"cycle {self.cycle} | block {self.outer} | numerically dependent column at p={state.p}")

        H = state.R[:state.p + 1, 1:state.p + 1]
        givens_update(self.ls, H[:, p_old:])
        if not np.all(np.isfinite(self.ls.g)):
            raise FloatingPointError(f"non-finite least-squares update in block step {self.outer}")
        return p_old

    def close_cycle(self):
        for key, value in self.state.counters.items():
            self.counters[key] = self.counters.get(key, 0) + value

    def record(self, check: StopCheck, status: SolveStatus) -> IterationRecord:
        cfg = self.cfg
        conditioning = cfg.diag_every > 0 and (self.outer % cfg.diag_every == 0 or status is not None)
        record = measure(self.state, self.ls, None, self.A, self.b, self.a_fro, self.outer, self.cycle, conditioning)
        record.backward_error = check.backward_error
        if status is not None:
            record.stop_reason = status.value
            # the accepted solution may use fewer columns than were generated
            if check.p is not None:
                record.inner_cols = check.p
        self.records.append(record)

        error = "n/a" if check.backward_error is None else f"{check.backward_error:.3e}"
        message = (f"cycle {self.cycle} | block {self.outer} | cols={self.state.p} | backward error: {error}"
                   f" | LS estimate: {self.ls.residual_estimate:.3e}")
        # the modified step's S factor is measured for the log only
        if self.state.last_s_factor_cond is not None:
            message += f" | cond(S): {self.state.last_s_factor_cond:.3e}"
        self.log(message)
        return record

    def finish(self, x: np.ndarray, status: SolveStatus, error: float = None) -> SolveResult:
        if error is None and np.all(np.isfinite(x)):
            error = backward_error(self.A, x, self.b, self.a_fro)
        self.log(f"{status.value} after {self.outer} block steps and {self.cycle} restarts"
                 f" | projections={self.counters['projections']} | intra QRs={self.counters['intra_qr']}"
                 f" | spmv={self.counters['spmv']}")
        return SolveResult(x, status, self.records, self.outer, error, self.cycle, dict(self.counters))

    def run(self, x0: np.ndarray = None) -> SolveResult:
        cfg = self.cfg
        x = np.zeros(self.n) if x0 is None else np.array(x0, dtype=np.float64)
        if x.shape != (self.n,):
            raise DimensionError(f"initial guess has shape {x.shape}, expected ({self.n},)")
        try:
            if not self.start_cycle(x):
                return self.finish(x, SolveStatus.CONVERGED_BACKWARD)
        except FloatingPointError:
            return self.finish(x, SolveStatus.NONFINITE)

        while True:
            try:
                p_old = self.block_step()
            except FloatingPointError as exc:
                self.log(str(exc))
                self.close_cycle()
                self.record(StopCheck(), SolveStatus.NONFINITE)
                return self.finish(self.x0, SolveStatus.NONFINITE)

            state = self.state
            check = check_stop(self.ls, state, cfg, self.A, self.b, self.x0, self.a_fro, p_old,
                               check_backward=self.outer % cfg.check_backward_every == 0)
            status = check.status
            if status is SolveStatus.KEY_DIMENSION_REACHED:
                self.log(f"cycle {self.cycle} | key dimension reached at p={check.p}")
            if status is None and state.breakdown:
                # numerically dependent but not yet accurate, the basis is still orthonormal
                state.breakdown = False
                state.breakdown_column = None

            cycle_full = state.p >= self.cycle_cap
            last_cycle = cfg.restart is None or self.cycle + 1 >= cfg.max_restarts
            if status is None and (self.outer >= cfg.max_outer or (cycle_full and last_cycle)):
                status = SolveStatus.MAX_ITERS
                if check.x is None:
                    x, p = provisional_solution(self.ls, state.Z, self.x0)
                    check = StopCheck(None, x, backward_error(self.A, x, self.b, self.a_fro), p)

            self.record(check, status)
            if status is not None:
                self.close_cycle()
                x = check.x if check.x is not None else self.x0
                if not np.all(np.isfinite(x)):
                    return self.finish(self.x0, SolveStatus.NONFINITE)
                return self.finish(x, status, check.backward_error)

            if cycle_full:
                self.close_cycle()
                x = check.x if check.p == state.p else provisional_solution(self.ls, state.Z, self.x0)[0]
                self.cycle += 1
                self.log(f"restart {self.cycle} after {self.outer} block steps")
                try:
                    if not self.start_cycle(x):
                        return self.finish(x, SolveStatus.CONVERGED_BACKWARD)
                except FloatingPointError:
                    return self.finish(x, SolveStatus.NONFINITE)

def solve(A, b: np.ndarray, x0: np.ndarray = None, cfg: SolverConfig = None) -> SolveResult:
    '''solve A x = b by s-step GMRES, restarted when cfg.restart is set'''
    return SStepGMRES(A, b, cfg or SolverConfig()).run(x0)

def solve_restarted(A, b: np.ndarray, x0: np.ndarray = None, cfg: SolverConfig = None) -> SolveResult:
    '''solve with restarts, every cycle starts from the latest iterate'''
    cfg = cfg or SolverConfig()
    if cfg.restart is None:
        raise ValueError("solve_restarted needs cfg.restart")
    return solve(A, b, x0, cfg)
