"""Penalty and approximation norms built from per-group pieces.

Every shipped norm has the form ``||x|| = sum_i ||x_{G_i}||_i`` over some
partition, which is what makes it decomposable: for ``u``, ``v`` living on
disjoint unions of groups, ``||u + v|| = ||u|| + ||v||``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    LaminarViolation,
    NoDisjointPairsAvailable,
    UnsupportedNorm,
)
from .group_model import GroupPartition, new_partition

VARIANTS = ("l1", "gl", "sgl", "tree")


@dataclass(frozen=True)
class NormSpec:
    """Which norm to use.

    ``variant`` is one of ``"l1"``, ``"gl"`` (group LASSO), ``"sgl"`` (sparse
    group LASSO with mixing weight ``mu``) or ``"tree"`` (tree-structured node
    sets, each measured with ``node_norm``). ``weights`` optionally scales each
    group's Euclidean norm in the group LASSO.
    """

    variant: str = "l1"
    mu: float | None = None
    nodes: tuple[tuple[int, ...], ...] | None = None
    node_norm: str = "l2"
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise UnsupportedNorm(f"unknown norm variant {self.variant!r}")
        if self.variant == "sgl":
            if self.mu is None or not 0.0 <= self.mu <= 1.0:
                raise ValueError("sparse group LASSO needs 0 <= mu <= 1")
        if self.variant == "tree":
            if not self.nodes:
                raise ValueError("tree norm needs at least one node set")
            if self.node_norm not in ("l1", "l2"):
                raise ValueError("node_norm must be 'l1' or 'l2'")
            check_laminar(self.nodes)
        if self.weights is not None and any(w <= 0 for w in self.weights):
            raise ValueError("group weights must be positive")

    @classmethod
    def l1(cls) -> "NormSpec":
        return cls("l1")

    @classmethod
    def group_lasso(cls, weights: Sequence[float] | None = None) -> "NormSpec":
        return cls("gl", weights=None if weights is None else tuple(float(w) for w in weights))

    @classmethod
    def sparse_group_lasso(cls, mu: float) -> "NormSpec":
        return cls("sgl", mu=float(mu))

    @classmethod
    def tree(cls, nodes: Sequence[Sequence[int]], node_norm: str = "l2") -> "NormSpec":
        return cls("tree", nodes=tuple(tuple(sorted(int(i) for i in s)) for s in nodes),
                   node_norm=node_norm)

    @property
    def label(self) -> str:
        if self.variant == "sgl":
            return f"sgl(mu={self.mu:g})"
        return self.variant

    def to_dict(self) -> dict:
        d: dict = {"variant": self.variant}
        if self.variant == "sgl":
            d["mu"] = self.mu
        if self.variant == "tree":
            d["nodes"] = [[i + 1 for i in s] for s in self.nodes]
            d["node_norm"] = self.node_norm
        if self.weights is not None:
            d["weights"] = list(self.weights)
        return d


def norm_from_dict(d: dict) -> NormSpec:
    """Parse the JSON form; tree node indices are 1-based."""
    variant = d["variant"]
    if variant == "tree":
        return NormSpec.tree([[int(i) - 1 for i in s] for s in d["nodes"]],
                             d.get("node_norm", "l2"))
    if variant == "sgl":
        return NormSpec.sparse_group_lasso(d["mu"])
    if variant == "gl":
        return NormSpec.group_lasso(d.get("weights"))
    return NormSpec(variant)


def parse_norm(text: str) -> NormSpec:
    """Accept ``l1``, ``gl``, ``sgl:0.5`` / ``sgl(0.5)``, a JSON string or a JSON file path."""
    text = text.strip()
    if text.startswith("{"):
        return norm_from_dict(json.loads(text))
    low = text.lower()
    if low in ("l1", "gl"):
        return NormSpec(low)
    if low.startswith("sgl"):
        rest = low[3:].strip(":=()").replace("mu=", "")
        return NormSpec.sparse_group_lasso(float(rest))
    with open(text) as fh:
        return norm_from_dict(json.load(fh))


# -- tree structures -------------------------------------------------------

def check_laminar(nodes: Sequence[Sequence[int]]) -> None:
    sets = [frozenset(s) for s in nodes]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            a, b = sets[i], sets[j]
            if a & b and not (a <= b or b <= a):
                raise LaminarViolation(
                    f"node sets {sorted(x + 1 for x in a)} and {sorted(x + 1 for x in b)} "
                    "overlap without nesting")


@dataclass(frozen=True)
class FlatTree:
    """Maximal node sets as a partition, with the node sets nested in each.

    ``members[j]`` lists the node sets contained in ``groups[j]``; groups added
    for uncovered indices have no members and are measured with ``|z_i|``.
    """

    groups: tuple[tuple[int, ...], ...]
    members: tuple[tuple[tuple[int, ...], ...], ...]
    node_norm: str

    def group_norm(self, j: int, z: np.ndarray) -> float:
        members = self.members[j]
        if not members:
            return float(np.abs(z[list(self.groups[j])]).sum())
        ord_ = 1 if self.node_norm == "l1" else 2
        return float(sum(np.linalg.norm(z[list(s)], ord_) for s in members))


@lru_cache(maxsize=64)
def flatten_tree(spec: NormSpec, n: int) -> FlatTree:
    """Replace tree node sets by their maximal sets, which partition the index set."""
    if spec.variant != "tree":
        raise UnsupportedNorm("flatten_tree needs a tree norm")
    nodes = list(dict.fromkeys(spec.nodes))
    for s in nodes:
        if any(not 0 <= i < n for i in s):
            raise IndexOutOfRange(f"tree node set outside 0..{n - 1}")
    check_laminar(nodes)
    fsets = [frozenset(s) for s in nodes]
    maximal = [s for s in nodes
               if not any(frozenset(s) < other for other in fsets)]
    covered = set().union(*fsets) if fsets else set()
    groups = [tuple(s) for s in maximal] + [(i,) for i in range(n) if i not in covered]
    groups.sort(key=lambda G: G[0])
    members = []
    for G in groups:
        fg = frozenset(G)
        members.append(tuple(s for s in spec.nodes if frozenset(s) <= fg)
                       if G in maximal else ())
    return FlatTree(tuple(groups), tuple(members), spec.node_norm)


def tree_partition(spec: NormSpec, n: int, k: int) -> GroupPartition:
    """The partition a tree norm is decomposable with respect to."""
    return new_partition(n, flatten_tree(spec, n).groups, k)


# -- evaluation --------------------------------------------------------------

def _check_dim(p: GroupPartition, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != p.n:
        raise DimensionMismatch(f"vector of shape {x.shape}, partition has n={p.n}")
    return x


def _block_l1(p: GroupPartition, x: np.ndarray) -> np.ndarray:
    return np.bincount(p.group_of, weights=np.abs(x), minlength=p.g)


def _block_l2(p: GroupPartition, x: np.ndarray) -> np.ndarray:
    return np.sqrt(np.bincount(p.group_of, weights=x * x, minlength=p.g))


def group_contributions(spec: NormSpec, p: GroupPartition, x) -> np.ndarray:
    """Per-group terms ``||x_{G_i}||_i`` whose sum is the norm of ``x``.

    For tree norms this requires every node set to sit inside one group of
    ``p``; otherwise the norm does not split along ``p`` and ``UnsupportedNorm``
    is raised.
    """
    x = _check_dim(p, x)
    if spec.variant == "l1":
        return _block_l1(p, x)
    if spec.variant == "gl":
        out = _block_l2(p, x)
        if spec.weights is not None:
            if len(spec.weights) != p.g:
                raise DimensionMismatch("one weight per group is required")
            out = out * np.asarray(spec.weights)
        return out
    if spec.variant == "sgl":
        return (1.0 - spec.mu) * _block_l1(p, x) + spec.mu * _block_l2(p, x)
    flat = flatten_tree(spec, p.n)
    out = np.zeros(p.g)
    for j, G in enumerate(flat.groups):
        owners = set(p.group_of[list(G)].tolist())
        if len(owners) != 1:
            raise UnsupportedNorm("tree node sets straddle groups of the partition")
        out[owners.pop()] += flat.group_norm(j, x)
    return out


def eval_norm(spec: NormSpec, p: GroupPartition, x) -> float:
    x = _check_dim(p, x)
    if spec.variant == "tree":
        flat = flatten_tree(spec, p.n)
        return float(sum(flat.group_norm(j, x) for j in range(len(flat.groups))))
    return float(group_contributions(spec, p, x).sum())


# -- decomposability ---------------------------------------------------------

@dataclass(frozen=True)
class DecomposabilityReport:
    trials: int
    max_violation: float
    gamma_tested: float
    passed: bool
    max_equality_gap: float | None = None


def _random_block_vector(rng, p: GroupPartition, group_ids, sparsify: bool) -> np.ndarray:
    v = np.zeros(p.n)
    for gid in group_ids:
        idx = p.index_arrays[gid]
        vals = rng.standard_normal(idx.size)
        if sparsify:
            vals[rng.random(idx.size) < 0.3] = 0.0
        v[idx] = vals
    return v


def check_decomposability(spec: NormSpec, p: GroupPartition, gamma: float = 1.0,
                          trials: int = 1000, seed: int = 0,
                          tol: float = 1e-12) -> DecomposabilityReport:
    """Probe ``||u + v|| >= ||u|| + gamma ||v||`` on random disjoint-group pairs.

    Violations are measured relative to ``||u|| + ||v||``. With ``gamma == 1``
    the equality gap ``| ||u+v|| - ||u|| - ||v|| |`` is tracked as well and
    counts towards ``passed``.
    """
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    if p.g < 2:
        raise NoDisjointPairsAvailable("a single group admits no disjoint pair")
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_eq = 0.0
    for t in range(trials):
        labels = rng.integers(0, 3, size=p.g)
        while not ((labels == 0).any() and (labels == 1).any()):
            labels = rng.integers(0, 3, size=p.g)
        sparsify = bool(t % 2)
        u = _random_block_vector(rng, p, np.flatnonzero(labels == 0), sparsify)
        v = _random_block_vector(rng, p, np.flatnonzero(labels == 1), sparsify)
        nu, nv = eval_norm(spec, p, u), eval_norm(spec, p, v)
        nuv = eval_norm(spec, p, u + v)
        scale = max(nu + nv, np.finfo(float).tiny)
        worst = max(worst, (nu + gamma * nv - nuv) / scale)
        if gamma == 1.0:
            worst_eq = max(worst_eq, abs(nuv - nu - nv) / scale)
    violation = max(worst, 0.0)
    passed = violation <= tol and (gamma != 1.0 or worst_eq <= tol)
    return DecomposabilityReport(trials, violation, gamma, passed,
                                 worst_eq if gamma == 1.0 else None)


def eval_norm_rows(spec: NormSpec, p: GroupPartition, X) -> np.ndarray:
    """Norm of every row of the ``(r, n)`` array ``X``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != p.n:
        raise DimensionMismatch(f"rows of length {X.shape[1]}, partition has n={p.n}")
    if spec.variant == "l1":
        return np.abs(X).sum(axis=1)
    if spec.variant == "tree":
        return np.array([eval_norm(spec, p, row) for row in X])
    onehot = np.zeros((p.n, p.g))
    onehot[np.arange(p.n), p.group_of] = 1.0
    l2 = np.sqrt((X * X) @ onehot)
    if spec.variant == "gl":
        if spec.weights is not None:
            l2 = l2 * np.asarray(spec.weights)
        return l2.sum(axis=1)
    return (1.0 - spec.mu) * np.abs(X).sum(axis=1) + spec.mu * l2.sum(axis=1)
