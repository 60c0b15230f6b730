import math

import numpy as np
import pytest
from numpy import testing

import arnoldi
from block_orth import loss_of_orthogonality
from conftest import max_principal_angle, well_conditioned_operator
from dense_kernels import cond2, householder_qr
from models.basis_kind import BasisKind
from models.preconditioner import Preconditioner
from models.randsvd_spec import RandSvdSpec
from poly_basis import as_operator, basis_from_ritz, build_krylov_block, compute_ritz_values
from sparse_io import gen_randsvd

IDENTITY = Preconditioner.identity()

def run_steps(A, r, s, variant="classical", kind=None, steps=1, scheme="bcgsi+"):
    state = arnoldi.start(r, s, variant)
    kind = kind or BasisKind.monomial()
    for _ in range(steps):
        arnoldi.arnoldi_step(state, A, IDENTITY, IDENTITY, kind, scheme)
        if state.breakdown:
            break
    return state

def orthonormal_krylov(A, r, k):
    '''orthonormal basis of span{r, A r, ..., A^{k-1} r}, Arnoldi with two Gram-Schmidt passes'''
    Q = np.zeros((len(r), k))
    Q[:, 0] = r / np.linalg.norm(r)
    for j in range(1, k):
        w = A @ Q[:, j - 1]
        for _ in range(2):
            w -= Q[:, :j] @ (Q[:, :j].T @ w)
        Q[:, j] = w / np.linalg.norm(w)
    return Q

def test_start():
    state = arnoldi.start(np.array([3.0, 4.0]), 2)
    testing.assert_allclose(state.V[:, 0], [0.6, 0.8])
    testing.assert_array_equal(state.R, [[5.0]])
    assert state.p == 0
    with pytest.raises(ValueError):
        arnoldi.start(np.zeros(3), 2)
    with pytest.raises(ValueError):
        arnoldi.start(np.ones(3), 2, "flexible")

@pytest.mark.parametrize("variant", ["classical", "modified"])
def test_identity_breaks_down_on_the_first_block(variant):
    state = run_steps(np.eye(4), np.array([1.0, 0.0, 0.0, 0.0]), 2, variant)
    assert state.breakdown
    assert state.breakdown_column == 1
    arnoldi.happy_breakdown_truncate(state, state.breakdown_column)
    assert state.p == 1
    assert state.V.shape[1] == 2
    assert abs(state.R[0, 1]) == pytest.approx(1.0)

def test_single_column_steps_are_standard_arnoldi():
    A = np.diag(np.arange(1.0, 11.0))
    state = run_steps(A, np.ones(10), 1, steps=5)
    assert state.p == 5
    testing.assert_array_equal(state.B, state.V[:, :5])
    H = state.R[:6, 1:6]
    testing.assert_array_equal(np.tril(H, -2), 0)
    assert np.linalg.norm(A @ state.V[:, :5] - state.V @ H) <= 1e-13 * np.linalg.norm(A)
    assert loss_of_orthogonality(state.V) <= 1e-14

def test_single_column_variants_agree(rng):
    A = well_conditioned_operator(rng, 25)
    r = rng.standard_normal(25)
    classical = run_steps(A, r, 1, "classical", steps=4)
    modified = run_steps(A, r, 1, "modified", steps=4)
    testing.assert_array_equal(classical.V, modified.V)
    testing.assert_array_equal(classical.R, modified.R)
    assert modified.last_s_factor_cond == 1.0

@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("s", [2, 3, 5])
@pytest.mark.parametrize("variant", ["classical", "modified"])
@pytest.mark.parametrize("name", ["monomial", "newton", "chebyshev"])
def test_bases_span_the_krylov_space(seed, s, variant, name):
    rng = np.random.default_rng(seed)
    n, steps = 40, max(2, 9 // s)
    A = well_conditioned_operator(rng, n)
    r = rng.standard_normal(n)
    kind = basis_from_ritz(name, compute_ritz_values(A, IDENTITY, IDENTITY, r, s))
    state = run_steps(A, r, s, variant, kind, steps)
    assert not state.breakdown
    p = s * steps
    assert state.p == p
    reference = orthonormal_krylov(A.to_dense(), r, p + 1)
    # Krylov blocks grown from the Arnoldi vector that started each step
    K = np.column_stack([build_krylov_block(as_operator(A), state.V[:, i * s], s, kind) for i in range(steps)])
    assert max_principal_angle(state.B, reference[:, :p]) <= 1e-8
    assert max_principal_angle(K, reference[:, :p]) <= 1e-8
    assert max_principal_angle(state.V, reference) <= 1e-8

@pytest.mark.parametrize("variant", ["classical", "modified"])
@pytest.mark.parametrize("scheme", ["bcgsi+", "bmgs"])
def test_factorization_residual(rng, variant, scheme):
    A = well_conditioned_operator(rng, 50)
    state = run_steps(A, rng.standard_normal(50), 4, variant, steps=4, scheme=scheme)
    assert state.p == 16
    assert state.factorization_residual() <= 1e-12
    testing.assert_allclose(state.W, as_operator(A).matmat(state.Z), rtol=1e-14, atol=1e-14)

def test_modified_first_block_is_qr_of_krylov_block(rng):
    A = well_conditioned_operator(rng, 30)
    r = rng.standard_normal(30)
    state = run_steps(A, r, 4, "modified")
    K = build_krylov_block(as_operator(A), r / float(np.linalg.norm(r)), 4, BasisKind.monomial())
    Q, R = householder_qr(K)
    testing.assert_array_equal(state.B, Q)
    assert state.last_s_factor_cond == cond2(R)

def test_modified_blocks_are_orthogonal_to_earlier_basis(rng):
    A = well_conditioned_operator(rng, 60)
    s = 3
    state = run_steps(A, rng.standard_normal(60), s, "modified", steps=4)
    for i in range(1, 4):
        block = state.B[:, i * s:(i + 1) * s]
        assert loss_of_orthogonality(block) <= 1e-13
        assert np.linalg.norm(state.V[:, :i * s].T @ block) <= 1e-10

def test_modified_basis_stays_well_conditioned():
    n, s = 20, 4
    A, _ = gen_randsvd(RandSvdSpec(n, 1e5, 1, seed=1))
    state = arnoldi.start(np.ones(n), s, "modified")
    kind = BasisKind.monomial()
    while state.p < n and not state.breakdown:
        arnoldi.modified_step(state, A, IDENTITY, IDENTITY, kind)
        if state.breakdown:
            arnoldi.happy_breakdown_truncate(state, state.breakdown_column)
        assert cond2(state.B) <= 2 * math.sqrt(n) + math.sqrt(s)

def test_width_override_and_counters(rng):
    A = well_conditioned_operator(rng, 20)
    state = arnoldi.start(rng.standard_normal(20), 4)
    arnoldi.classical_step(state, A, IDENTITY, IDENTITY, BasisKind.monomial())
    assert state.counters["spmv"] == 3 + 4
    arnoldi.classical_step(state, A, IDENTITY, IDENTITY, BasisKind.monomial(), width=2)
    assert state.p == 6
    assert state.last_width == 2
    assert state.vr_state.blocks == [1, 4, 2]
    assert state.steps == 2

def test_right_preconditioning_keeps_z_and_w_consistent(rng):
    A = well_conditioned_operator(rng, 20)
    M_R = Preconditioner.jacobi(np.linspace(1.0, 3.0, 20))
    state = arnoldi.start(rng.standard_normal(20), 3)
    arnoldi.classical_step(state, A, IDENTITY, M_R, BasisKind.monomial(), basis_operator="preconditioned")
    testing.assert_allclose(state.Z, state.B / np.linspace(1.0, 3.0, 20)[:, None])
    testing.assert_allclose(state.W, A.to_dense() @ state.Z, atol=1e-14)

def test_happy_breakdown_truncate(rng):
    A = well_conditioned_operator(rng, 30)
    state = run_steps(A, rng.standard_normal(30), 3, steps=2)
    assert state.p == 6
    same = arnoldi.happy_breakdown_truncate(state, None)
    assert same is state and not state.breakdown

    arnoldi.happy_breakdown_truncate(state, 4)
    assert state.breakdown and state.breakdown_column == 4
    assert state.p == 4
    assert state.V.shape == (30, 5)
    assert state.R.shape == (5, 5)
    assert state.B.shape == state.Z.shape == (30, 4)
    assert state.last_width == 1
    assert state.vr_state.blocks == [1, 3, 1]

def test_breakdown_on_the_newest_column_keeps_everything(rng):
    A = well_conditioned_operator(rng, 30)
    state = run_steps(A, rng.standard_normal(30), 3, steps=2)
    arnoldi.happy_breakdown_truncate(state, 6)
    assert state.breakdown
    assert state.p == 6
    assert state.V.shape[1] == 7
