import numpy as np
import pytest
from hypothesis import given, strategies as st

from groupcs.errors import DimensionMismatch, InfeasibleProblem, UnsupportedNorm
from groupcs.group_model import new_partition, singleton_partition, uniform_partition
from groupcs.norms import NormSpec, eval_norm
from groupcs.sampling import generate_matrix
from groupcs.solver import (
    FeasibleSet, RecoveryProblem, SolverOptions, project_feasible, prox_penalty, recover,
)
from oracles import BallProjector, in_subdifferential, projected_subgradient
from strategies import partition_and_vector

PROX_SPECS = [NormSpec.l1(), NormSpec.group_lasso(), NormSpec.sparse_group_lasso(0.3),
              NormSpec.sparse_group_lasso(0.8)]


def test_prox_l1_example():
    p = singleton_partition(2, 1)
    assert prox_penalty(NormSpec.l1(), p, np.array([2.0, -0.5]), 1.0).tolist() == [1.0, 0.0]


def test_prox_gl_example():
    p = new_partition(3, [[0, 1, 2]], 3)
    v = np.array([1.0, 2.0, 2.0])
    np.testing.assert_allclose(prox_penalty(NormSpec.group_lasso(), p, v, 1.0), v * 2 / 3, rtol=1e-15)


@given(partition_and_vector(), st.floats(1e-12, 1e-6))
def test_prox_small_tau_is_near_identity(pv, tau):
    p, v = pv
    for spec in PROX_SPECS:
        # each prox moves v by at most tau times the largest subgradient norm (sqrt(n))
        assert np.linalg.norm(prox_penalty(spec, p, v, tau) - v) <= tau * np.sqrt(p.n) * (1 + 1e-9)


@given(partition_and_vector(), st.floats(0.01, 5.0))
def test_prox_subgradient_membership(pv, tau):
    p, v = pv
    for spec in PROX_SPECS:
        z = prox_penalty(spec, p, v, tau)
        assert in_subdifferential(spec.variant, p.groups, z, (v - z) / tau, spec.mu, tol=1e-8)


@given(partition_and_vector(), st.floats(0.01, 5.0))
def test_sgl_prox_endpoints(pv, tau):
    p, v = pv
    np.testing.assert_allclose(prox_penalty(NormSpec.sparse_group_lasso(1.0), p, v, tau),
                               prox_penalty(NormSpec.group_lasso(), p, v, tau), atol=1e-15)
    np.testing.assert_allclose(prox_penalty(NormSpec.sparse_group_lasso(0.0), p, v, tau),
                               prox_penalty(NormSpec.l1(), p, v, tau), atol=1e-15)


def test_weighted_gl_prox_membership():
    p = uniform_partition(6, 2, 4)
    w = np.array([1.0, 2.0, 0.5])
    spec = NormSpec.group_lasso(weights=w)
    v = np.array([3.0, 0.5, 1.0, -1.0, 0.2, 0.1])
    z = prox_penalty(spec, p, v, 1.0)
    for gid, G in enumerate(p.groups):
        G = list(G)
        u, zg = v[G] - z[G], z[G]
        if np.linalg.norm(zg) > 0:
            np.testing.assert_allclose(u, w[gid] * zg / np.linalg.norm(zg), atol=1e-12)
        else:
            assert np.linalg.norm(u) <= w[gid] + 1e-12


def test_prox_rejects_tree_and_bad_tau():
    p = uniform_partition(4, 2, 2)
    with pytest.raises(UnsupportedNorm):
        prox_penalty(NormSpec.tree([[0, 1]]), p, np.ones(4), 1.0)
    with pytest.raises(ValueError):
        prox_penalty(NormSpec.l1(), p, np.ones(4), 0.0)


# -- projection ----------------------------------------------------------------------

def test_projection_identity_cases():
    rng = np.random.default_rng(0)
    A, y = rng.standard_normal((6, 10)), rng.standard_normal(6)
    C = FeasibleSet(A, y, 0.5)
    v = C.least_norm_point()
    np.testing.assert_array_equal(project_feasible(C, v), v)
    y = rng.standard_normal(5)
    np.testing.assert_allclose(FeasibleSet(np.eye(5), y, 0.0).project(rng.standard_normal(5)), y, atol=1e-14)


@pytest.mark.parametrize("seed", range(10))
def test_projection_variational_inequality(seed):
    rng = np.random.default_rng(seed)
    A, y = rng.standard_normal((6, 10)), rng.standard_normal(6)
    eps = float(rng.uniform(0.05, 1.0))
    C = FeasibleSet(A, y, eps)
    v = 3 * rng.standard_normal(10)
    z = C.project(v)
    r = np.linalg.norm(A @ z - y)
    assert np.array_equal(z, v) or abs(r - eps) <= 1e-10 * max(1, eps)
    base = C.least_norm_point()
    for _ in range(200):
        d = rng.standard_normal(10)
        w = base + d
        # pull w back inside along the segment to the least-norm point
        rw = np.linalg.norm(A @ w - y)
        if rw > eps:
            w = base + d * (eps / rw)
        assert (v - z) @ (z - w) >= -1e-9
    np.testing.assert_allclose(z, BallProjector(A, y, eps)(v), atol=1e-7)


def test_projection_eps_zero_hits_affine_set():
    rng = np.random.default_rng(3)
    A, y = rng.standard_normal((4, 7)), rng.standard_normal(4)
    v = rng.standard_normal(7)
    z = FeasibleSet(A, y, 0.0).project(v)
    np.testing.assert_allclose(A @ z, y, atol=1e-12)
    # the correction is orthogonal to the null space of A
    N = np.linalg.svd(A)[2][4:]
    np.testing.assert_allclose(N @ (z - v), 0, atol=1e-12)


def test_infeasible_when_y_outside_range():
    A = np.zeros((3, 4))
    A[0, 0] = 1.0
    y = np.array([1.0, 1.0, 0.0])
    with pytest.raises(InfeasibleProblem):
        FeasibleSet(A, y, 0.0)
    with pytest.raises(InfeasibleProblem):
        FeasibleSet(A, y, 0.5)
    FeasibleSet(A, y, 1.0)


# -- recovery ---------------------------------------------------------------------------

@pytest.mark.parametrize("spec", PROX_SPECS, ids=lambda s: s.label)
def test_zero_measurements_give_zero(spec):
    p = uniform_partition(8, 2, 4)
    res = recover(RecoveryProblem(generate_matrix(5, 8, 0), np.zeros(5), 0.3, spec, p))
    assert res.converged and not res.x_hat.any()


def test_exact_recovery_example():
    p = uniform_partition(32, 4, 8)
    A = generate_matrix(24, 32, 7)
    x = np.zeros(32)
    x[4:8] = [1.0, -0.7, 0.9, 1.2]
    x[20:24] = [-0.6, 1.4, 0.5, -1.1]
    res = recover(RecoveryProblem(A, A @ x, 0.0, NormSpec.group_lasso(), p))
    assert res.converged and np.linalg.norm(res.x_hat - x) < 1e-6


@pytest.mark.parametrize("seed", range(6))
def test_feasibility_and_optimality_certificate(seed):
    rng = np.random.default_rng(seed)
    p = uniform_partition(20, 4, 8)
    spec = PROX_SPECS[seed % 4]
    A = generate_matrix(12, 20, seed)
    x = rng.standard_normal(20) * (rng.random(20) < 0.3)
    eps = 0.05 * (seed % 3)
    eta = rng.standard_normal(12)
    y = A @ x + (eps * eta / np.linalg.norm(eta) if eps else 0)
    res = recover(RecoveryProblem(A, y, eps, spec, p))
    assert res.converged and res.objective >= 0
    assert np.linalg.norm(y - A @ res.x_hat) <= eps + 1e-8
    assert res.constraint_slack >= -1e-8
    assert res.objective <= eval_norm(spec, p, x) + 1e-6


@pytest.mark.parametrize("seed", range(4))
def test_matches_subgradient_oracle(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(6, 11))
    m = int(rng.integers(3, n))
    variant = "gl" if seed % 2 else "l1"
    p = uniform_partition(n, 2 if variant == "gl" else 1, 4)
    A = rng.standard_normal((m, n)) / np.sqrt(m)
    y = rng.standard_normal(m)
    eps = 0.3 * np.linalg.norm(y) * rng.uniform()
    res = recover(RecoveryProblem(A, y, eps, NormSpec(variant), p))
    _, f_or = projected_subgradient(A, y, eps, variant, p.groups, epochs=25, per_epoch=150)
    assert abs(f_or - res.objective) <= 1e-4 * res.objective


def test_iteration_limit_returns_feasible_best():
    p = uniform_partition(20, 4, 8)
    A = generate_matrix(10, 20, 1)
    y = np.random.default_rng(1).standard_normal(10)
    res = recover(RecoveryProblem(A, y, 0.1, NormSpec.group_lasso(), p), SolverOptions(max_iters=3))
    assert not res.converged and res.iterations == 3
    assert np.linalg.norm(y - A @ res.x_hat) <= 0.1 + 1e-8


def test_problem_validation():
    p = uniform_partition(4, 2, 2)
    with pytest.raises(DimensionMismatch):
        RecoveryProblem(np.ones((3, 5)), np.ones(3), 0.0, NormSpec.l1(), p)
    with pytest.raises(ValueError):
        RecoveryProblem(np.ones((3, 4)), np.ones(3), -1.0, NormSpec.l1(), p)
    with pytest.raises(UnsupportedNorm):
        recover(RecoveryProblem(np.eye(4), np.ones(4), 0.0, NormSpec.tree([[0, 1]]), p))
