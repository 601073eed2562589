"""Group k-sparsity index and the greedy optimal group k-sparse decomposition."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UnsupportedNorm
from .group_model import (
    DEFAULT_ENUMERATION_CAP,
    GroupKSparseSet,
    GroupPartition,
    enumerate_gks,
    gks_membership,
    restrict,
)
from .norms import NormSpec, eval_norm, group_contributions

# Residuals within this relative distance of the minimum count as ties.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class SparseDecomposition:
    lambdas: tuple[GroupKSparseSet, ...]
    parts: tuple[np.ndarray, ...]
    sigma: float

    @property
    def s(self) -> int:
        """Index of the last stage (the decomposition has ``s + 1`` parts)."""
        return len(self.lambdas) - 1

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "lambda0": self.lambdas[0].one_based(),
            "stages": [
                {"groups": [gid + 1 for gid in lam.member_group_ids],
                 "indices": lam.one_based(),
                 "part": part.tolist()}
                for lam, part in zip(self.lambdas, self.parts)
            ],
        }


@lru_cache(maxsize=32)
def _gks_table(p: GroupPartition, cap: int):
    sets = enumerate_gks(p, cap)
    return sets, gks_membership(sets, p.g)


def _residual_norms(x, spec: NormSpec, p: GroupPartition, sets, member) -> np.ndarray:
    """``||x - x_Lambda||`` for every candidate ``Lambda``."""
    try:
        w = group_contributions(spec, p, x)
    except UnsupportedNorm:
        return np.array([eval_norm(spec, p, x - restrict(x, s)) for s in sets])
    # x - x_Lambda keeps exactly the groups outside Lambda.
    return (~member).astype(float) @ w


def _argmin_first(values: np.ndarray) -> int:
    lo = values.min()
    return int(np.flatnonzero(values <= lo + TIE_RTOL * abs(lo))[0])


def _best_set(x, spec, p, cap, used: np.ndarray):
    sets, member = _gks_table(p, cap)
    rows = np.flatnonzero(~member[:, used].any(axis=1)) if used.any() else np.arange(len(sets))
    if rows.size == 0:
        return None
    cand = [sets[r] for r in rows]
    res = _residual_norms(x, spec, p, cand, member[rows])
    return cand[_argmin_first(res)]


def sparsity_index(x, spec: NormSpec, p: GroupPartition,
                   cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[float, GroupKSparseSet]:
    """Smallest ``||x - x_Lambda||`` over group k-sparse ``Lambda``, and a minimizer.

    Ties go to the lexicographically smallest list of member group ids.
    """
    x = np.asarray(x, dtype=float)
    lam0 = _best_set(x, spec, p, cap, np.zeros(p.g, dtype=bool))
    return eval_norm(spec, p, x - restrict(x, lam0)), lam0


def optimal_decomposition(x, spec: NormSpec, p: GroupPartition,
                          cap: int = DEFAULT_ENUMERATION_CAP,
                          exclude=()) -> SparseDecomposition:
    """Peel off group k-sparse pieces of ``x`` greedily.

    Stage 0 attains the sparsity index; each later stage picks, among unions of
    groups not used so far, the one leaving the smallest residual norm. Groups in
    ``exclude`` are never used (their entries are expected to be zero, as for
    ``h`` restricted to the complement of a fixed set).
    """
    x = np.asarray(x, dtype=float)
    used = np.zeros(p.g, dtype=bool)
    used[list(exclude)] = True
    residual = x.copy()
    residual[np.isin(p.group_of, np.flatnonzero(used))] = 0.0
    lambdas: list[GroupKSparseSet] = []
    parts: list[np.ndarray] = []
    while True:
        lam = _best_set(residual, spec, p, cap, used)
        if lam is None:
            break
        part = restrict(residual, lam)
        lambdas.append(lam)
        parts.append(part)
        residual[list(lam.indices)] = 0.0
        used[list(lam.member_group_ids)] = True
        if not residual.any():
            break
    sigma = eval_norm(spec, p, x - parts[0]) if parts else eval_norm(spec, p, x)
    return SparseDecomposition(tuple(lambdas), tuple(parts), sigma)


def check_interleaving_counterexample(x, p: GroupPartition) -> bool:
    """True when the second l1 stage holds an entry larger than some entry of the first.

    Under conventional sparsity the stages are magnitude ordered, so this never
    happens; group constraints can force it.
    """
    dec = optimal_decomposition(x, NormSpec.l1(), p)
    if len(dec.parts) < 2:
        return False
    first = np.abs(dec.parts[0])
    first = first[first > 0]
    if first.size == 0:
        return False
    return bool(np.abs(dec.parts[1]).max() > first.min())

