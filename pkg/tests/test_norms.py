import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from groupcs.errors import (
    DimensionMismatch, LaminarViolation, NoDisjointPairsAvailable, UnsupportedNorm,
)
from groupcs.group_model import new_partition, uniform_partition
from groupcs.norms import (
    NormSpec, check_decomposability, eval_norm, eval_norm_rows, flatten_tree, norm_from_dict,
    parse_norm, tree_partition,
)
from oracles import norm_direct
from strategies import partition_and_vector, partitions, vectors

SPECS = [NormSpec.l1(), NormSpec.group_lasso(), *(NormSpec.sparse_group_lasso(m) for m in (0, 0.3, 0.7, 1))]


def test_group_lasso_value(p4, x4):
    assert eval_norm(NormSpec.group_lasso(), p4, x4) == pytest.approx(
        np.hypot(1, 0.1) + np.hypot(0.6, 0.6), rel=1e-15)
    assert eval_norm(NormSpec.group_lasso(), p4, x4) == pytest.approx(1.853516, abs=1e-6)


def test_l1_value(p4, x4):
    assert eval_norm(NormSpec.l1(), p4, x4) == pytest.approx(2.3, rel=1e-15)


@pytest.mark.parametrize("mu", [0.0, 0.25, 0.5, 1.0])
def test_sgl_equals_l1_with_one_entry_per_group(p4, mu):
    x = np.array([0.0, -3.0, 2.0, 0.0])
    assert eval_norm(NormSpec.sparse_group_lasso(mu), p4, x) == pytest.approx(5.0, rel=1e-15)


@given(partition_and_vector())
def test_matches_direct_formula(pv):
    p, x = pv
    for spec in SPECS:
        want = norm_direct(spec.variant, p.groups, x, spec.mu)
        assert eval_norm(spec, p, x) == pytest.approx(want, rel=1e-12, abs=1e-12)


@given(partition_and_vector(), st.data())
def test_norm_axioms(pv, data):
    p, x = pv
    y = data.draw(vectors(p.n))
    a = data.draw(st.floats(-4, 4, allow_nan=False))
    for spec in SPECS:
        nx, ny = eval_norm(spec, p, x), eval_norm(spec, p, y)
        assert nx >= 0 and (nx == 0) == (not x.any())
        assert eval_norm(spec, p, a * x) == pytest.approx(abs(a) * nx, rel=1e-12, abs=1e-12)
        assert eval_norm(spec, p, x + y) <= (nx + ny) * (1 + 1e-12) + 1e-12


@given(partition_and_vector())
def test_sgl_endpoints(pv):
    p, x = pv
    assert eval_norm(NormSpec.sparse_group_lasso(1.0), p, x) == pytest.approx(
        eval_norm(NormSpec.group_lasso(), p, x), rel=1e-12, abs=1e-15)
    assert eval_norm(NormSpec.sparse_group_lasso(0.0), p, x) == pytest.approx(
        eval_norm(NormSpec.l1(), p, x), rel=1e-12, abs=1e-15)


@given(partitions(max_n=8, min_groups=2), st.integers(0, 2**31))
def test_recursive_additivity(p, seed):
    # Parts on pairwise-disjoint group sparse sets add up in norm.
    rng = np.random.default_rng(seed)
    free = list(range(p.g))
    rng.shuffle(free)
    parts = []
    while free:
        S = []
        while free and sum(len(p.groups[i]) for i in S + [free[0]]) <= p.k:
            S.append(free.pop(0))
        u = np.zeros(p.n)
        idx = list(p.union(S))
        u[idx] = rng.standard_normal(len(idx))
        parts.append(u)
    total = sum(parts)
    for spec in SPECS:
        assert eval_norm(spec, p, total) == pytest.approx(
            sum(eval_norm(spec, p, u) for u in parts), rel=1e-12)


def test_batched_rows_agree(p8):
    X = np.random.default_rng(1).standard_normal((20, 8))
    for spec in SPECS + [NormSpec.group_lasso(weights=[1, 2, 3, 0.5])]:
        np.testing.assert_allclose(eval_norm_rows(spec, p8, X),
                                   [eval_norm(spec, p8, r) for r in X], rtol=1e-13)


def test_weighted_group_lasso(p4, x4):
    spec = NormSpec.group_lasso(weights=[2.0, 0.5])
    assert eval_norm(spec, p4, x4) == pytest.approx(2 * np.hypot(1, 0.1) + 0.5 * np.hypot(0.6, 0.6))


def test_dimension_mismatch(p4):
    with pytest.raises(DimensionMismatch):
        eval_norm(NormSpec.l1(), p4, np.ones(5))


# -- tree norms ---------------------------------------------------------------------

def test_flatten_nested():
    spec = NormSpec.tree([[0, 1], [0], [2, 3]])
    assert flatten_tree(spec, 4).groups == ((0, 1), (2, 3))


def test_flatten_adds_singletons():
    spec = NormSpec.tree([[0], [1], [0, 1], [2]])
    assert flatten_tree(spec, 4).groups == ((0, 1), (2,), (3,))


def test_laminar_violation():
    with pytest.raises(LaminarViolation):
        NormSpec.tree([[0, 1], [1, 2]])


def test_tree_value_is_nested_sum():
    spec = NormSpec.tree([[0, 1], [0], [2, 3]])
    p = tree_partition(spec, 5, 2)
    x = np.array([3.0, 4.0, 1.0, 0.0, -2.0])
    assert eval_norm(spec, p, x) == pytest.approx(5 + 3 + 1 + 2)


def test_tree_json_one_based():
    spec = norm_from_dict({"variant": "tree", "nodes": [[1, 2], [1]], "node_norm": "l1"})
    assert spec.nodes == ((0, 1), (0,))
    assert spec.to_dict()["nodes"] == [[1, 2], [1]]


# -- decomposability ------------------------------------------------------------------

@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label)
def test_decomposability_equality(spec):
    p = uniform_partition(12, 3, 6)
    rep = check_decomposability(spec, p, trials=1000, seed=3)
    assert rep.passed and rep.max_violation <= 1e-12 and rep.max_equality_gap <= 1e-12


def test_tree_decomposability():
    spec = NormSpec.tree([[0, 1, 2], [0], [1, 2], [4, 5], [5]])
    p = tree_partition(spec, 7, 3)
    assert check_decomposability(spec, p, trials=500, seed=1).passed


def test_gamma_below_one_is_inequality():
    rep = check_decomposability(NormSpec.group_lasso(), uniform_partition(6, 2, 4), gamma=0.5, trials=200)
    assert rep.passed and rep.max_equality_gap is None


def test_non_decomposable_norm_is_caught():
    # Group norm on a coarser partition than the one probed is not additive across it.
    spec = NormSpec.group_lasso()
    coarse = new_partition(4, [[0, 1, 2, 3]], 4)
    fine = new_partition(4, [[0, 1], [2, 3]], 2)
    u, v = np.array([1.0, 0, 0, 0]), np.array([0, 0, 1.0, 0])
    assert eval_norm(spec, coarse, u + v) < eval_norm(spec, coarse, u) + eval_norm(spec, coarse, v)
    assert eval_norm(spec, fine, u + v) == eval_norm(spec, fine, u) + eval_norm(spec, fine, v)


def test_single_group_has_no_pairs():
    with pytest.raises(NoDisjointPairsAvailable):
        check_decomposability(NormSpec.l1(), new_partition(2, [[0, 1]], 2))


@pytest.mark.parametrize("text,variant,mu", [
    ("l1", "l1", None), ("GL", "gl", None), ("sgl:0.5", "sgl", 0.5), ("sgl(0.25)", "sgl", 0.25),
    ('{"variant": "sgl", "mu": 0.7}', "sgl", 0.7),
])
def test_parse_norm(text, variant, mu):
    spec = parse_norm(text)
    assert spec.variant == variant and spec.mu == mu


def test_parse_norm_file(tmp_path):
    f = tmp_path / "n.json"
    f.write_text(json.dumps({"variant": "gl"}))
    assert parse_norm(str(f)).variant == "gl"


def test_bad_specs():
    with pytest.raises(UnsupportedNorm):
        NormSpec("linf")
    with pytest.raises(ValueError):
        NormSpec.sparse_group_lasso(1.5)
