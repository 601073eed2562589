"""Group partitions, group k-sparse sets and support primitives.

Indices are 0-based in memory. The JSON partition format is 1-based::

    {"n": 4, "k": 2, "groups": [[1, 2], [3, 4]]}
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyGroup,
    EnumerationCapExceeded,
    GroupTooLarge,
    IncompleteCover,
    IndexOutOfRange,
    OverlappingGroups,
)

DEFAULT_ENUMERATION_CAP = 200_000
SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class GroupPartition:
    """A partition of ``{0..n-1}`` into groups, each of size at most ``k``."""

    n: int
    groups: tuple[tuple[int, ...], ...]
    k: int

    @cached_property
    def g(self) -> int:
        return len(self.groups)

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.array([len(G) for G in self.groups], dtype=np.int64)

    @property
    def l_min(self) -> int:
        return int(self.sizes.min())

    @property
    def l_max(self) -> int:
        return int(self.sizes.max())

    @property
    def s_max(self) -> int:
        return self.k // self.l_min

    @cached_property
    def group_of(self) -> np.ndarray:
        """``group_of[i]`` is the id of the group holding index ``i``."""
        out = np.empty(self.n, dtype=np.int64)
        for gid, G in enumerate(self.groups):
            out[list(G)] = gid
        return out

    @cached_property
    def index_arrays(self) -> tuple[np.ndarray, ...]:
        return tuple(np.asarray(G, dtype=np.int64) for G in self.groups)

    @cached_property
    def max_set_size(self) -> int:
        """Largest cardinality of a union of whole groups that fits in ``k``."""
        reach = 1
        for s in self.sizes.tolist():
            reach |= reach << s
        reach &= (1 << (self.k + 1)) - 1
        return reach.bit_length() - 1

    @property
    def is_singleton(self) -> bool:
        return self.l_max == 1

    def union(self, group_ids: Iterable[int]) -> tuple[int, ...]:
        idx: list[int] = []
        for gid in group_ids:
            idx.extend(self.groups[gid])
        return tuple(sorted(idx))

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k,
                "groups": [[i + 1 for i in G] for G in self.groups]}


@dataclass(frozen=True, order=True)
class GroupKSparseSet:
    """A union of whole groups ``G_S`` with ``|G_S| <= k``."""

    member_group_ids: tuple[int, ...]
    indices: tuple[int, ...] = field(compare=False)

    @property
    def cardinality(self) -> int:
        return len(self.indices)

    def one_based(self) -> list[int]:
        return [i + 1 for i in self.indices]

    def __len__(self) -> int:
        return len(self.indices)


def new_partition(n: int, groups: Sequence[Iterable[int]], k: int) -> GroupPartition:
    """Validate ``groups`` (0-based) as a partition of ``{0..n-1}``.

    Group order is kept as given; indices within a group are sorted.
    """
    n = int(n)
    k = int(k)
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    seen = np.full(n, -1, dtype=np.int64)
    clean = []
    for gid, G in enumerate(groups):
        G = tuple(sorted(int(i) for i in G))
        if not G:
            raise EmptyGroup(f"group {gid + 1} is empty")
        if len(set(G)) != len(G):
            raise OverlappingGroups(f"group {gid + 1} repeats an index")
        for i in G:
            if not 0 <= i < n:
                raise IndexOutOfRange(f"index {i + 1} of group {gid + 1} outside 1..{n}")
            if seen[i] >= 0:
                raise OverlappingGroups(
                    f"index {i + 1} appears in groups {seen[i] + 1} and {gid + 1}")
            seen[i] = gid
        if len(G) > k:
            raise GroupTooLarge(f"group {gid + 1} has {len(G)} > k={k} indices")
        clean.append(G)
    missing = np.flatnonzero(seen < 0)
    if missing.size:
        raise IncompleteCover(f"indices not covered: {(missing + 1).tolist()}")
    return GroupPartition(n=n, groups=tuple(clean), k=k)


def singleton_partition(n: int, k: int) -> GroupPartition:
    """Conventional sparsity: every index is its own group."""
    return new_partition(n, [[i] for i in range(n)], k)


def uniform_partition(n: int, size: int, k: int) -> GroupPartition:
    """Consecutive groups of ``size`` indices (the last may be shorter)."""
    return new_partition(n, [range(s, min(s + size, n)) for s in range(0, n, size)], k)


def partition_from_dict(d: dict) -> GroupPartition:
    return new_partition(d["n"], [[int(i) - 1 for i in G] for G in d["groups"]], d["k"])


def load_partition(path) -> GroupPartition:
    with open(path) as fh:
        return partition_from_dict(json.load(fh))


def group_id_subsets(p: GroupPartition, budget: int, allowed: Sequence[int], cap: int):
    """Depth-first, lexicographic enumeration of nonempty S with |G_S| <= budget."""
    sizes = p.sizes
    allowed = list(allowed)
    out: list[tuple[int, ...]] = []
    stack: list[int] = []

    def rec(start: int, used: int) -> None:
        for pos in range(start, len(allowed)):
            gid = allowed[pos]
            size = int(sizes[gid])
            if used + size > budget:
                continue
            stack.append(gid)
            out.append(tuple(stack))
            if len(out) > cap:
                raise EnumerationCapExceeded(
                    f"more than {cap} group sparse sets; instance too large")
            rec(pos + 1, used + size)
            stack.pop()

    rec(0, 0)
    return out


def enumerate_gks(p: GroupPartition, cap: int = DEFAULT_ENUMERATION_CAP,
                  exclude: Iterable[int] = ()) -> list[GroupKSparseSet]:
    """All nonempty group k-sparse sets, ordered lexicographically by member ids.

    ``exclude`` removes groups from consideration (used by later stages of a
    decomposition, which may only draw on unused groups).
    """
    excluded = set(exclude)
    allowed = [gid for gid in range(p.g) if gid not in excluded]
    return [GroupKSparseSet(S, p.union(S)) for S in group_id_subsets(p, p.k, allowed, cap)]


def gks_membership(sets: Sequence[GroupKSparseSet], g: int) -> np.ndarray:
    """Boolean ``(len(sets), g)`` matrix; row ``j`` marks the groups of ``sets[j]``."""
    M = np.zeros((len(sets), g), dtype=bool)
    for row, s in enumerate(sets):
        M[row, list(s.member_group_ids)] = True
    return M


def _as_index_array(lam, n: int) -> np.ndarray:
    if isinstance(lam, GroupKSparseSet):
        lam = lam.indices
    idx = np.asarray(list(lam), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise IndexOutOfRange(f"index set not within 0..{n - 1}")
    return idx


def restrict(x, lam) -> np.ndarray:
    """Copy of ``x`` with every entry outside ``lam`` set to zero."""
    x = np.asarray(x, dtype=float)
    idx = _as_index_array(lam, x.shape[0])
    out = np.zeros_like(x)
    out[idx] = x[idx]
    return out


def complement(lam, n: int) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    mask[_as_index_array(lam, n)] = False
    return np.flatnonzero(mask)


def support(x, tol: float = SUPPORT_TOL) -> np.ndarray:
    return np.flatnonzero(np.abs(np.asarray(x, dtype=float)) > tol)


def support_groups(x, p: GroupPartition, tol: float = SUPPORT_TOL) -> tuple[int, ...]:
    return tuple(sorted(set(p.group_of[support(x, tol)].tolist())))


def is_group_k_sparse(x, p: GroupPartition, tol: float = SUPPORT_TOL) -> bool:
    # The smallest union of whole groups containing supp(x) is the union of the
    # groups the support touches; any admissible cover must contain it.
    touched = support_groups(x, p, tol)
    return int(p.sizes[list(touched)].sum()) <= p.k if touched else True
