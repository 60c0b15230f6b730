import math

import numpy as np
import pytest
from numpy import testing

import sstep_gmres
from conftest import well_conditioned_operator
from dense_kernels import UNIT_ROUNDOFF
from errors import DimensionError, SingularTriangularError
from models.csr_matrix import CsrMatrix
from models.ls_state import LsState
from models.solve_result import SolveStatus
from models.solver_config import SolverConfig
from problems import diagonal_problem, example_one
from sstep_gmres import SStepGMRES, build_preconditioners, form_solution, givens_update, provisional_solution, solve

def ramp(n, low=1.0, high=2.0):
    return CsrMatrix.from_scipy(np.diag(np.linspace(low, high, n)))

def hessenberg(rng, rows, cols):
    return np.triu(rng.standard_normal((rows, cols)), -1)

def test_givens_update_single_column():
    ls = givens_update(LsState(1.0), np.array([[1.0], [1.0]]))
    assert ls.p == 1
    testing.assert_allclose(ls.T, [[math.sqrt(2)]])
    testing.assert_allclose(ls.g, [1 / math.sqrt(2), -1 / math.sqrt(2)])
    assert ls.residual_estimate == pytest.approx(1 / math.sqrt(2))

def test_givens_update_matches_least_squares(rng):
    beta, p = 2.5, 12
    H = hessenberg(rng, p + 1, p)
    ls = LsState(beta)
    for start in range(0, p, 3):
        givens_update(ls, H[:start + 4, start:start + 3])
    assert ls.p == p
    testing.assert_array_equal(np.tril(ls.T, -1), 0)

    rhs = np.zeros(p + 1)
    rhs[0] = beta
    y_ref, residual, _, _ = np.linalg.lstsq(H, rhs, rcond=None)
    y = np.linalg.solve(ls.T, ls.g[:p])
    testing.assert_allclose(y, y_ref, rtol=1e-10)
    assert ls.residual_estimate == pytest.approx(math.sqrt(residual[0]), rel=1e-10)

def test_givens_update_rejects_wrong_row_count(rng):
    with pytest.raises(DimensionError):
        givens_update(LsState(1.0), rng.standard_normal((3, 1)))

def test_form_solution():
    ls = LsState(4.0)
    ls.T = np.array([[2.0]])
    ls.g = np.array([4.0, 1.0])
    Z = np.array([[1.0], [1.0], [0.0]])
    x0 = np.array([1.0, 0.0, 0.0])
    testing.assert_array_equal(form_solution(ls, Z, x0), [3.0, 2.0, 0.0])
    testing.assert_array_equal(form_solution(ls, Z, x0, p=0), x0)

def test_singular_triangle_falls_back_to_prefix():
    ls = LsState(1.0)
    ls.T = np.array([[1.0, 1.0], [0.0, 0.0]])
    ls.g = np.array([1.0, 1.0, 0.0])
    Z = np.eye(3)[:, :2]
    with pytest.raises(SingularTriangularError) as info:
        form_solution(ls, Z, np.zeros(3))
    assert info.value.column == 1
    x, p = provisional_solution(ls, Z, np.zeros(3))
    assert p == 1
    testing.assert_array_equal(x, [1.0, 0.0, 0.0])

def test_identity_converges_in_one_step():
    result = solve(np.eye(5), np.ones(5))
    assert result.status.converged
    assert result.outer_iterations == 1
    testing.assert_allclose(result.x, np.ones(5))
    assert result.records[-1].stop_reason == result.status.value

def test_diagonal_system(diag20):
    result = solve(diag20.A, diag20.b)
    assert result.backward_error <= 10 * 20 * UNIT_ROUNDOFF
    testing.assert_allclose(result.x, 1.0 / np.arange(1.0, 21.0), rtol=1e-12)

@pytest.mark.parametrize("variant", ["classical", "modified"])
@pytest.mark.parametrize("s", [2, 3])
def test_block_sizes_solve_small_diagonal(variant, s):
    problem = diagonal_problem(10)
    result = solve(problem.A, problem.b, cfg=SolverConfig(s=s, variant=variant))
    assert np.max(np.abs(result.x - 1.0 / np.arange(1.0, 11.0))) <= 1e-11

def test_single_column_variants_are_identical(diag20):
    classical = solve(diag20.A, diag20.b, cfg=SolverConfig(variant="classical"))
    modified = solve(diag20.A, diag20.b, cfg=SolverConfig(variant="modified"))
    testing.assert_array_equal(classical.x, modified.x)
    assert classical.status == modified.status
    assert len(classical.records) == len(modified.records)

def test_ls_estimate_is_monotone(rng):
    A = well_conditioned_operator(rng, 40)
    result = solve(A, rng.standard_normal(40), cfg=SolverConfig(s=3))
    estimates = [r.ls_residual_estimate for r in result.records]
    assert all(later <= earlier * (1 + 1e-12) for earlier, later in zip(estimates, estimates[1:]))

def test_ls_estimate_matches_true_residual(rng):
    A = well_conditioned_operator(rng, 40)
    b = rng.standard_normal(40)
    solver = SStepGMRES(A, b, SolverConfig(s=3))
    x0 = np.zeros(40)
    assert solver.start_cycle(x0)
    for _ in range(3):
        solver.block_step()
    x = form_solution(solver.ls, solver.state.Z, x0)
    assert np.linalg.norm(b - A.matrix @ x) == pytest.approx(solver.ls.residual_estimate, rel=1e-8)

def test_full_length_restart_matches_plain_solve():
    A = ramp(30)
    b = np.ones(30)
    plain = solve(A, b, cfg=SolverConfig(s=2, tol=1e-10))
    restarted = solve(A, b, cfg=SolverConfig(s=2, tol=1e-10, restart=30))
    assert plain.status is SolveStatus.CONVERGED_BACKWARD
    assert restarted.restarts == 0
    testing.assert_array_equal(plain.x, restarted.x)
    assert plain.outer_iterations == restarted.outer_iterations

def test_restart_cycles():
    A = ramp(30)
    result = sstep_gmres.solve_restarted(A, np.ones(30), cfg=SolverConfig(s=2, tol=1e-12, restart=6))
    assert result.status is SolveStatus.CONVERGED_BACKWARD
    assert result.backward_error <= 1e-12
    assert result.restarts >= 1
    assert max(r.inner_cols for r in result.records) <= 6
    assert result.records[-1].restart_cycle == result.restarts
    cycles = [r.restart_cycle for r in result.records]
    assert cycles == sorted(cycles)

def test_solve_restarted_needs_a_restart_length(diag20):
    with pytest.raises(ValueError):
        sstep_gmres.solve_restarted(diag20.A, diag20.b)

def example_one_run(variant, s, basis="monomial"):
    problem = example_one()
    return solve(problem.A, problem.b, cfg=SolverConfig(s=s, variant=variant, basis=basis, restart=20))

def test_classical_basis_stagnates_on_example_one():
    result = example_one_run("classical", 3)
    assert not result.status.converged
    assert result.backward_error >= 1e-10
    assert result.max_cond_b_tilde() >= 1e8
    subblocks = [record.cond_B_subblock for record in result.records if record.cond_B_subblock is not None]
    assert subblocks
    assert max(subblocks) < 1e6

@pytest.mark.parametrize("basis", ["monomial", "newton", "chebyshev"])
def test_larger_classical_blocks_stagnate_on_example_one(basis):
    assert example_one_run("classical", 4, basis).backward_error >= 1e-7

def test_classical_basis_loses_conditioning_without_key_dimension():
    problem = example_one()
    cfg = SolverConfig(s=3, variant="classical", restart=20, check_key_dimension=False)
    result = solve(problem.A, problem.b, cfg=cfg)
    assert result.max_cond_b_tilde() >= 1e8

def test_modified_variant_solves_example_one():
    assert example_one_run("modified", 3).backward_error <= 1e-13

@pytest.mark.parametrize("basis", ["newton", "chebyshev"])
def test_polynomial_bases_solve(rng, basis):
    A = well_conditioned_operator(rng, 40)
    result = solve(A, rng.standard_normal(40), cfg=SolverConfig(s=4, basis=basis))
    assert result.backward_error <= 1e-12
    assert result.counters["spmv"] > 0

@pytest.mark.parametrize("side", ["left", "right"])
def test_jacobi_preconditioning(rng, side):
    n = 30
    scale = np.logspace(0, 4, n)
    A = CsrMatrix.from_dense(scale[:, None] * well_conditioned_operator(rng, n).to_dense())
    b = rng.standard_normal(n)
    result = solve(A, b, cfg=SolverConfig(s=2, precond="jacobi", precond_side=side))
    assert result.backward_error <= 1e-12

def test_build_preconditioners():
    A = diagonal_problem(4).A
    M_L, M_R = build_preconditioners(A, SolverConfig(precond="jacobi", precond_side="left"))
    assert M_R.is_identity and not M_L.is_identity
    testing.assert_array_equal(M_L.diagonal, [1.0, 2.0, 3.0, 4.0])
    M_L, M_R = build_preconditioners(A, SolverConfig(precond="jacobi"))
    assert M_L.is_identity and not M_R.is_identity
    M_L, M_R = build_preconditioners(A, SolverConfig())
    assert M_L.is_identity and M_R.is_identity

def test_backward_error_checked_every_third_step():
    result = solve(ramp(30), np.ones(30), cfg=SolverConfig(check_backward_every=3))
    assert len(result.records) > 3
    assert result.records[0].backward_error is None
    assert result.records[1].backward_error is None
    assert result.records[2].backward_error is not None

def test_diagnostics_thinning():
    off = solve(ramp(30), np.ones(30), cfg=SolverConfig(diag_every=0))
    assert all(r.cond_B_tilde is None and r.cond_V is None for r in off.records)
    every_other = solve(ramp(30), np.ones(30), cfg=SolverConfig(diag_every=2))
    assert every_other.records[0].cond_B_tilde is None
    assert every_other.records[1].cond_B_tilde is not None
    assert every_other.records[-1].cond_V is not None

def test_ls_criterion_can_terminate():
    cfg = SolverConfig(tol_ls=1e-2, ls_advisory=False)
    result = solve(ramp(30), np.ones(30), cfg=cfg)
    assert result.status is SolveStatus.CONVERGED_LS
    assert result.status.converged
    assert result.records[-1].ls_residual_estimate <= 1e-2 * math.sqrt(30)

def test_advisory_ls_criterion_forces_a_backward_check():
    cfg = SolverConfig(tol=1e-12, tol_ls=1e-2, check_backward_every=1000)
    result = solve(ramp(30), np.ones(30), cfg=cfg)
    assert result.status is SolveStatus.CONVERGED_BACKWARD
    first = next(r for r in result.records if r.backward_error is not None)
    assert first.ls_residual_estimate <= 1e-2 * math.sqrt(30)

def test_key_dimension_can_be_disabled(diag20):
    result = solve(diag20.A, diag20.b, cfg=SolverConfig(s=4, check_key_dimension=False))
    assert result.status is not SolveStatus.KEY_DIMENSION_REACHED

def test_zero_right_hand_side():
    result = solve(ramp(5), np.zeros(5))
    assert result.status is SolveStatus.CONVERGED_BACKWARD
    assert result.outer_iterations == 0
    assert result.records == []
    assert result.backward_error == 0.0
    testing.assert_array_equal(result.x, 0.0)

def test_shape_checks():
    with pytest.raises(DimensionError):
        solve(ramp(5), np.ones(4))
    with pytest.raises(DimensionError):
        solve(ramp(5), np.ones(5), np.zeros(3))
    with pytest.raises(ValueError):
        solve(ramp(5), np.ones(5), cfg=SolverConfig(s=6))

def test_overflow_is_reported():
    result = solve(np.full((4, 4), 1e308), np.ones(4))
    assert result.status is SolveStatus.NONFINITE
    assert not result.status.converged
    testing.assert_array_equal(result.x, 0.0)

def test_verbose_progress(capsys):
    solve(ramp(6), np.ones(6), cfg=SolverConfig(s=2, verbose=True))
    out = capsys.readouterr().out
    assert "s-step GMRES | cycle 0 | block 1" in out

def test_verbose_progress_reports_the_s_factor_of_modified_steps(capsys):
    solve(ramp(8), np.ones(8), cfg=SolverConfig(s=3, variant="modified", verbose=True))
    modified = capsys.readouterr().out
    assert "| cond(S): " in modified
    solve(ramp(8), np.ones(8), cfg=SolverConfig(s=3, verbose=True))
    assert "cond(S)" not in capsys.readouterr().out
