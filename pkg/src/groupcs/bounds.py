"""Compressibility condition and the error-bound coefficients D1..D4.

With ``g = sqrt(2) delta / (1 - delta)`` the two error estimates combine into a
2x2 linear system whose determinant is ``1 - g r d / f``; the matrix is
compressible exactly when that determinant is positive, i.e. when
``delta < 1 / (1 + sqrt(2) r d / f)``. The coefficients are then

    D1 = r (1 + gamma) / f * (1 + (sqrt 2 - 1) delta) / den
    D2 = 2 (1 + r d / f) sqrt(1 + delta) / den
    D3 = r (1 + gamma) * (1 + (sqrt(2) d / f - 1) delta) / den
    D4 = 2 d (1 + r) sqrt(1 + delta) / den

with ``den = 1 - (1 + sqrt(2) r d / f) delta``, bounding
``||x_hat - x||_2 <= D1 sigma + D2 eps`` and ``||x_hat - x||_A <= D3 sigma + D4 eps``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from math import inf, sqrt

from .constants import NormConstants
from .errors import NotCompressible

SQRT2 = sqrt(2.0)
POLE_TOL = 1e-12


def conventional_constants(k: int) -> NormConstants:
    """Constants for l1 minimization under conventional k-sparsity."""
    return NormConstants(1.0, 1.0, 1.0, sqrt(k), sqrt(k), 1.0)


def compressibility_threshold(c: NormConstants) -> float:
    """Largest ``delta_2k`` (exclusive) for which the bounds hold."""
    return 1.0 / (1.0 + SQRT2 * c.r * c.d / c.f)


def determinant(c: NormConstants, delta2k: float) -> float:
    if delta2k >= 1.0:
        return -inf
    g = SQRT2 * delta2k / (1.0 - delta2k)
    return 1.0 - g * c.r * c.d / c.f


@dataclass(frozen=True)
class BoundReport:
    delta2k: float
    threshold: float
    compressible: bool
    D1: float
    D2: float
    D3: float
    D4: float
    constants: NormConstants
    l2_bound: float | None = None
    approx_bound: float | None = None

    def to_dict(self) -> dict:
        return {
            "delta2k": self.delta2k,
            "threshold": self.threshold,
            "compressible": self.compressible,
            "D1": self.D1, "D2": self.D2, "D3": self.D3, "D4": self.D4,
            "constants": self.constants.to_dict(),
            "l2_bound": self.l2_bound,
            "approx_bound": self.approx_bound,
        }


def bound_coefficients(c: NormConstants, delta2k: float) -> BoundReport:
    """D1..D4 at ``delta2k``; all four are ``inf`` outside the compressible range."""
    if not 0.0 <= delta2k:
        raise ValueError("delta2k must be nonnegative")
    threshold = compressibility_threshold(c)
    r, d, f, gam = c.r, c.d, c.f, c.gamma
    den = 1.0 - (1.0 + SQRT2 * r * d / f) * delta2k
    compressible = delta2k < 1.0 and determinant(c, delta2k) > 0.0 and den > POLE_TOL
    if not compressible:
        return BoundReport(delta2k, threshold, False, inf, inf, inf, inf, c)
    root = sqrt(1.0 + delta2k)
    return BoundReport(
        delta2k, threshold, True,
        D1=r * (1.0 + gam) / f * (1.0 + (SQRT2 - 1.0) * delta2k) / den,
        D2=2.0 * (1.0 + r * d / f) * root / den,
        D3=r * (1.0 + gam) * (1.0 + (SQRT2 * d / f - 1.0) * delta2k) / den,
        D4=2.0 * d * (1.0 + r) * root / den,
        constants=c,
    )


def evaluate_bound(rep: BoundReport, sigma: float, eps: float) -> tuple[float, float]:
    """``(D1 sigma + D2 eps, D3 sigma + D4 eps)``."""
    if not rep.compressible:
        raise NotCompressible(
            f"delta2k = {rep.delta2k:.6g} is not below the threshold {rep.threshold:.6g}")
    if sigma < 0 or eps < 0:
        raise ValueError("sigma and eps must be nonnegative")
    return rep.D1 * sigma + rep.D2 * eps, rep.D3 * sigma + rep.D4 * eps


def with_bounds(rep: BoundReport, sigma: float, eps: float) -> BoundReport:
    l2, approx = evaluate_bound(rep, sigma, eps)
    return replace(rep, l2_bound=l2, approx_bound=approx)
