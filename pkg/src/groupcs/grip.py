"""Exact restricted isometry constants for desk-scale matrices.

For a family of index sets ``T`` the constant is
``max_T max(lambda_max(A_T' A_T) - 1, 1 - lambda_min(A_T' A_T))``, with the
extremal eigenvalues of every Gram submatrix computed by cyclic Jacobi.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, sqrt

import numpy as np

from . import kernels
from .constants import closed_form_constants
from .decomposition import optimal_decomposition, sparsity_index
from .errors import (
    DeltaTooLarge,
    DimensionMismatch,
    EnumerationCapExceeded,
    NoDisjointPairsAvailable,
    RankDeficientWarning,
)
from .group_model import (
    DEFAULT_ENUMERATION_CAP,
    GroupKSparseSet,
    GroupPartition,
    group_id_subsets,
    enumerate_gks,
    gks_membership,
    restrict,
)
from .norms import NormSpec, eval_norm

RANK_TOL = 1e-12


@dataclass(frozen=True)
class GripReport:
    order: int
    delta: float
    witness_set: GroupKSparseSet
    lambda_min: float
    lambda_max: float
    n_sets: int
    per_set_bounds: dict | None = field(default=None, compare=False)

    @property
    def rank_deficient(self) -> bool:
        return self.lambda_min <= RANK_TOL * max(1.0, self.lambda_max)

    def to_dict(self) -> dict:
        d = {
            "order": self.order,
            "delta": self.delta,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "n_sets": self.n_sets,
            "witness_groups": [gid + 1 for gid in self.witness_set.member_group_ids],
            "witness_indices": self.witness_set.one_based(),
            "rank_deficient": self.rank_deficient,
        }
        if self.per_set_bounds is not None:
            d["per_set_bounds"] = [
                {"groups": [gid + 1 for gid in S], "lambda_min": lo, "lambda_max": hi}
                for S, (lo, hi) in self.per_set_bounds.items()
            ]
        return d


def _splits_in_two(sizes: list[int], k: int) -> bool:
    """Can the groups be split into two parts of at most ``k`` indices each?"""
    total = sum(sizes)
    reach = 1
    for s in sizes:
        reach |= reach << s
    lo = max(total - k, 0)
    return any((reach >> t) & 1 for t in range(lo, min(k, total) + 1))


def gks_family(p: GroupPartition, order: int, cap: int = DEFAULT_ENUMERATION_CAP
               ) -> list[GroupKSparseSet]:
    """Index sets over which a constant of the given order is taken.

    Order ``k`` uses the group k-sparse sets themselves. Order ``2k`` uses every
    union of two disjoint group k-sparse sets, together with the single sets.
    """
    if order == p.k:
        return enumerate_gks(p, cap)
    if order != 2 * p.k:
        raise ValueError(f"order must be k={p.k} or 2k={2 * p.k}")
    sizes = p.sizes.tolist()
    out = []
    for S in group_id_subsets(p, 2 * p.k, range(p.g), cap):
        if _splits_in_two([sizes[i] for i in S], p.k):
            out.append(GroupKSparseSet(S, p.union(S)))
    return out


def _check_matrix(A, n: int | None = None) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise DimensionMismatch("A must be a matrix")
    if n is not None and A.shape[1] != n:
        raise DimensionMismatch(f"A has {A.shape[1]} columns, expected {n}")
    return A


def _report(order, sets, lo, hi, keep_bounds) -> GripReport:
    dev = np.maximum(hi - 1.0, 1.0 - lo)
    j = int(np.argmax(dev))
    rep = GripReport(
        order=order,
        delta=float(max(dev[j], 0.0)),
        witness_set=sets[j],
        lambda_min=float(lo.min()),
        lambda_max=float(hi.max()),
        n_sets=len(sets),
        per_set_bounds={s.member_group_ids: (float(a), float(b))
                        for s, a, b in zip(sets, lo, hi)} if keep_bounds else None,
    )
    if rep.rank_deficient:
        warnings.warn(
            f"a column submatrix of order {order} is rank deficient; delta >= 1",
            RankDeficientWarning, stacklevel=3)
    return rep


def grip_constant(A, p: GroupPartition, order: int | None = None,
                  cap: int = DEFAULT_ENUMERATION_CAP, keep_bounds: bool = False) -> GripReport:
    """Group restricted isometry constant of ``A`` (``order`` defaults to ``2k``)."""
    A = _check_matrix(A, p.n)
    order = 2 * p.k if order is None else int(order)
    sets = gks_family(p, order, cap)
    gram = A.T @ A
    lo, hi = kernels.subset_extreme_eigs(gram, [s.indices for s in sets])
    return _report(order, sets, lo, hi, keep_bounds)


def rip_constant(A, k: int, cap: int = DEFAULT_ENUMERATION_CAP) -> GripReport:
    """Classical restricted isometry constant of order ``k``.

    By eigenvalue interlacing only supports of size ``min(k, n)`` need checking.
    """
    A = _check_matrix(A)
    n = A.shape[1]
    size = min(int(k), n)
    if comb(n, size) > cap:
        raise EnumerationCapExceeded(f"C({n},{size}) supports exceed the cap of {cap}")
    supports = list(combinations(range(n), size))
    gram = A.T @ A
    lo, hi = kernels.subset_extreme_eigs(gram, supports)
    sets = [GroupKSparseSet(T, T) for T in supports]
    return _report(int(k), sets, lo, hi, False)


def _disjoint_pairs(p: GroupPartition, cap: int):
    sets = enumerate_gks(p, cap)
    member = gks_membership(sets, p.g).astype(np.int64)
    disjoint = (member @ member.T) == 0
    return sets, disjoint


def sample_disjoint_pair(rng, sets, disjoint) -> tuple[GroupKSparseSet, GroupKSparseSet]:
    candidates = np.flatnonzero(disjoint.any(axis=1))
    if candidates.size == 0:
        raise NoDisjointPairsAvailable("no two disjoint group k-sparse sets exist")
    i = int(rng.choice(candidates))
    j = int(rng.choice(np.flatnonzero(disjoint[i])))
    return sets[i], sets[j]


def check_disjoint_inner_product(A, p: GroupPartition, trials: int = 1000, seed: int = 0,
                                 cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """Largest ``|<Au, Av>| / (||u|| ||v||)`` over random ``u``, ``v`` on disjoint group sets."""
    A = _check_matrix(A, p.n)
    rng = np.random.default_rng(seed)
    sets, disjoint = _disjoint_pairs(p, cap)
    worst = 0.0
    for _ in range(trials):
        su, sv = sample_disjoint_pair(rng, sets, disjoint)
        u = np.zeros(p.n)
        v = np.zeros(p.n)
        u[list(su.indices)] = rng.standard_normal(su.cardinality)
        v[list(sv.indices)] = rng.standard_normal(sv.cardinality)
        worst = max(worst, abs((A @ u) @ (A @ v)) / (np.linalg.norm(u) * np.linalg.norm(v)))
    return float(worst)


def estimate_lemma_terms(A, p: GroupPartition, h, spec: NormSpec, delta2k: float | None = None,
                         lambda0: GroupKSparseSet | None = None, f: float | None = None,
                         cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[float, float]:
    """Left and right side of the restricted-energy estimate for ``h``.

    With ``Lambda = Lambda_0 u Lambda_1`` (``Lambda_1`` the first stage of the
    decomposition of ``h`` off ``Lambda_0``), returns ``||h_Lambda||_2`` and
    ``sqrt(2) delta / (f (1 - delta)) ||h_{Lambda_0^c}||_A
    + sqrt(1 + delta) / (1 - delta) ||A h||_2``.
    """
    A = _check_matrix(A, p.n)
    h = np.asarray(h, dtype=float)
    if delta2k is None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RankDeficientWarning)
            delta2k = grip_constant(A, p, 2 * p.k, cap).delta
    if delta2k >= 1.0:
        raise DeltaTooLarge(f"delta_2k = {delta2k:.4g} >= 1")
    if f is None:
        f = closed_form_constants(spec, p).f
    if lambda0 is None:
        _, lambda0 = sparsity_index(h, spec, p, cap)
    tail = h - restrict(h, lambda0)
    idx = list(lambda0.indices)
    if tail.any():
        dec = optimal_decomposition(tail, spec, p, cap, exclude=lambda0.member_group_ids)
        idx += list(dec.lambdas[0].indices)
    lhs = float(np.linalg.norm(restrict(h, idx)))
    rhs = (sqrt(2.0) * delta2k / (f * (1.0 - delta2k)) * eval_norm(spec, p, tail)
           + sqrt(1.0 + delta2k) / (1.0 - delta2k) * float(np.linalg.norm(A @ h)))
    return lhs, rhs


def verify_estimate_lemma(A, p: GroupPartition, h, spec: NormSpec, delta2k: float | None = None,
                          lambda0: GroupKSparseSet | None = None, f: float | None = None,
                          rtol: float = 1e-10) -> bool:
    lhs, rhs = estimate_lemma_terms(A, p, h, spec, delta2k, lambda0, f)
    return lhs <= rhs * (1.0 + rtol) + 1e-300
