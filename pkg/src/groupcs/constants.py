"""Norm-equivalence constants feeding the error bounds.

``a``, ``b`` compare the penalty norm with the approximation norm and ``c``,
``d`` compare the approximation norm with the Euclidean norm, all over vectors
supported on a group k-sparse set. ``f`` is the constant in the tail bound
``sum_{j>=2} ||h_{Lambda_j}||_2 <= ||h_{Lambda_0^c}||_A / f`` and ``gamma`` the
decomposability parameter of the penalty norm.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from math import sqrt

import numpy as np

from .decomposition import optimal_decomposition, sparsity_index
from .errors import UnsupportedNormForClosedForm
from .group_model import DEFAULT_ENUMERATION_CAP, GroupPartition, enumerate_gks, restrict
from .norms import NormSpec, eval_norm, eval_norm_rows


@dataclass(frozen=True)
class NormConstants:
    a: float
    b: float
    c: float
    d: float
    f: float
    gamma: float = 1.0

    def __post_init__(self):
        if not (0 < self.a <= self.b and 0 < self.c <= self.d and self.f > 0):
            raise ValueError(f"inconsistent constants {self}")
        if not 0 < self.gamma <= 1:
            raise ValueError("gamma must lie in (0, 1]")

    @property
    def r(self) -> float:
        return self.b / (self.a * self.gamma)

    def to_dict(self) -> dict:
        return {**asdict(self), "r": self.r}


def closed_form_constants(spec: NormSpec, p: GroupPartition, sgl_d: str = "safe") -> NormConstants:
    """Constants for the case where penalty and approximation norm coincide.

    l1 over singletons gives ``(1, 1, 1, sqrt(k), sqrt(k), 1)``; group LASSO gives
    ``d = sqrt(s_max)``, both with ``f = c = 1``.

    For the sparse group LASSO the l1 part of a vector on ``Lambda`` can reach
    ``sqrt(|Lambda|)`` times its Euclidean norm, so the default (``sgl_d="safe"``)
    is ``d = (1-mu) sqrt(K) + mu sqrt(s_max)`` with ``K`` the largest admissible
    ``|Lambda|``. ``sgl_d="printed"`` gives ``(1-mu) sqrt(l_max) + mu sqrt(s_max)``,
    which understates ``d`` as soon as a set may hold more than one group.
    """
    if spec.variant == "l1":
        rk = sqrt(p.k)
        # Magnitude ordering of the stages, which gives f = sqrt(k), only holds for singletons.
        return NormConstants(1.0, 1.0, 1.0, rk, rk if p.is_singleton else 1.0)
    if spec.variant == "gl" and spec.weights is None:
        return NormConstants(1.0, 1.0, 1.0, sqrt(p.s_max), 1.0)
    if spec.variant == "sgl":
        if sgl_d not in ("safe", "printed"):
            raise ValueError("sgl_d must be 'safe' or 'printed'")
        width = p.max_set_size if sgl_d == "safe" else p.l_max
        d = (1.0 - spec.mu) * sqrt(width) + spec.mu * sqrt(p.s_max)
        return NormConstants(1.0, 1.0, 1.0, d, 1.0)
    raise UnsupportedNormForClosedForm(
        f"no closed form for {spec.label}; use estimate_c_d")


def _probe_rows(rng, p: GroupPartition, lam, samples: int) -> np.ndarray:
    """Random unit directions on ``lam`` plus the known extremal directions."""
    idx = np.asarray(lam.indices)
    rows = []
    for i in idx:
        e = np.zeros(p.n)
        e[i] = 1.0
        rows.append(e)
    flat = np.zeros(p.n)
    flat[idx] = 1.0
    rows.append(flat)
    # equal energy in every block, spread evenly inside each block
    eq = np.zeros(p.n)
    for gid in lam.member_group_ids:
        G = p.index_arrays[gid]
        eq[G] = 1.0 / sqrt(G.size)
    rows.append(eq)
    for gid in lam.member_group_ids:
        one = np.zeros(p.n)
        one[p.index_arrays[gid]] = rng.standard_normal(p.index_arrays[gid].size)
        rows.append(one)
    Z = np.zeros((samples, p.n))
    Z[:, idx] = rng.standard_normal((samples, idx.size))
    signs = rng.choice([-1.0, 1.0], size=(samples, idx.size))
    Z[: samples // 2, idx] = signs[: samples // 2]
    return np.vstack([np.array(rows), Z])


def estimate_c_d(spec: NormSpec, p: GroupPartition, samples: int = 64, seed: int = 0,
                 cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[float, float]:
    """Range of ``||z||_A / ||z||_2`` seen over probes supported on each group k-sparse set."""
    rng = np.random.default_rng(seed)
    lo, hi = np.inf, 0.0
    for lam in enumerate_gks(p, cap):
        X = _probe_rows(rng, p, lam, samples)
        ratio = eval_norm_rows(spec, p, X) / np.linalg.norm(X, axis=1)
        lo = min(lo, float(ratio.min()))
        hi = max(hi, float(ratio.max()))
    return lo, hi


def estimate_a_b(penalty: NormSpec, approx: NormSpec, p: GroupPartition, samples: int = 64,
                 seed: int = 0, cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[float, float]:
    """Range of ``||z||_P / ||z||_A`` over probes supported on each group k-sparse set."""
    rng = np.random.default_rng(seed)
    lo, hi = np.inf, 0.0
    for lam in enumerate_gks(p, cap):
        X = _probe_rows(rng, p, lam, samples)
        ratio = eval_norm_rows(penalty, p, X) / eval_norm_rows(approx, p, X)
        lo = min(lo, float(ratio.min()))
        hi = max(hi, float(ratio.max()))
    return lo, hi


def tail_bound_terms(h, spec: NormSpec, p: GroupPartition, lambda0=None,
                     cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[float, float]:
    """Both sides of the decomposition tail bound, without the ``1/f`` factor.

    Returns ``(sum_{j>=2} ||h_{Lambda_j}||_2, ||h_{Lambda_0^c}||_A)`` where
    ``h_{Lambda_1}, h_{Lambda_2}, ...`` is the optimal decomposition of the part
    of ``h`` outside ``lambda0`` (by default the set attaining the sparsity index).
    """
    h = np.asarray(h, dtype=float)
    if lambda0 is None:
        _, lambda0 = sparsity_index(h, spec, p, cap)
    tail = h - restrict(h, lambda0)
    rhs = eval_norm(spec, p, tail)
    if not tail.any():
        return 0.0, rhs
    dec = optimal_decomposition(tail, spec, p, cap, exclude=lambda0.member_group_ids)
    # dec.parts[0] is h_{Lambda_1}; the bound covers the stages after it.
    lhs = float(sum(np.linalg.norm(part) for part in dec.parts[1:]))
    return lhs, rhs
