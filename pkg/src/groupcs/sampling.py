"""Sample-size bounds for sub-Gaussian measurement matrices, and matrix generation.

A zero-mean unit-variance variable with ``P(|X| > t) <= alpha exp(-beta t^2)``
gives the concentration constant ``c = beta^2 / (4 alpha + 2 beta)``. With
``theta = 1 - sqrt(1 - delta)`` a union bound over a family ``J`` of supports
fails with probability at most ``2 |J| (12/theta)^k exp(-m c theta^2)``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from math import ceil, e, exp, log, sqrt

import numpy as np

from .errors import InvalidRange, NonPositiveParameter


@dataclass(frozen=True)
class SubGaussianProfile:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise NonPositiveParameter("alpha and beta must be positive")

    @property
    def c(self) -> float:
        return subgaussian_c(self.alpha, self.beta)


GAUSSIAN = SubGaussianProfile(2.0, 0.5)
# |X| = 1 surely, so P(|X| > t) = 1{t < 1} <= e * exp(-t^2).
RADEMACHER = SubGaussianProfile(e, 1.0)


def subgaussian_c(alpha: float, beta: float) -> float:
    if not (alpha > 0 and beta > 0):
        raise NonPositiveParameter("alpha and beta must be positive")
    return beta * beta / (4.0 * alpha + 2.0 * beta)


def theta_of(delta: float) -> float:
    return 1.0 - sqrt(1.0 - delta)


def _check_probabilities(delta: float, zeta: float) -> None:
    if not (0.0 < delta < 1.0 and 0.0 < zeta < 1.0):
        raise InvalidRange("delta and zeta must lie in (0, 1)")


def rip_bound_value(n: int, k: int, delta: float, zeta: float,
                    prof: SubGaussianProfile = GAUSSIAN) -> float:
    """Real-valued measurement bound for RIP of order ``k`` (before rounding up)."""
    _check_probabilities(delta, zeta)
    if not 0 < k < n:
        raise InvalidRange("need 0 < k < n")
    th = theta_of(delta)
    return (log(2.0 / zeta) + k * (log(e * n / k) + log(12.0 / th))) / (prof.c * th * th)


def grip_bound_value(g: int, s_max: int, k: int, delta: float, zeta: float,
                     prof: SubGaussianProfile = GAUSSIAN) -> float:
    """Real-valued measurement bound for group RIP of order ``k``."""
    _check_probabilities(delta, zeta)
    if not (0 < s_max <= g and k > 0):
        raise InvalidRange("need 0 < s_max <= g and k > 0")
    th = theta_of(delta)
    return (log(2.0 / zeta) + s_max * log(e * g / s_max) + k * log(12.0 / th)) / (prof.c * th * th)


def min_measurements_rip(n: int, k: int, delta: float, zeta: float,
                         prof: SubGaussianProfile = GAUSSIAN) -> int:
    return ceil(rip_bound_value(n, k, delta, zeta, prof))


def min_measurements_grip(g: int, s_max: int, k: int, delta: float, zeta: float,
                          prof: SubGaussianProfile = GAUSSIAN) -> int:
    return ceil(grip_bound_value(g, s_max, k, delta, zeta, prof))


def rip_family_size(n: int, k: int) -> float:
    """Sauer-type bound ``(e n / k)^k`` on the number of supports of size at most ``k``."""
    return (e * n / k) ** k


def grip_family_size(g: int, s_max: int) -> float:
    return (e * g / s_max) ** s_max


@dataclass(frozen=True)
class FailureProbability:
    value: float
    raw: float


def failure_probability(family_size: float, k: int, theta: float, m: int,
                        prof: SubGaussianProfile = GAUSSIAN) -> FailureProbability:
    """``2 |J| (12/theta)^k exp(-m c theta^2)``, clamped to ``[0, 1]`` in ``value``."""
    if family_size < 1:
        raise InvalidRange("family size must be at least 1")
    log_raw = (log(2.0) + log(family_size) + k * log(12.0 / theta)
               - m * prof.c * theta * theta)
    raw = exp(log_raw) if log_raw < 700 else float("inf")
    return FailureProbability(min(max(raw, 0.0), 1.0), raw)


@dataclass(frozen=True)
class SamplingPlan:
    n: int
    k: int
    g: int
    s_max: int
    delta: float
    zeta: float
    theta: float
    c: float
    m_s: int
    m_gs: int
    m_s_value: float
    m_gs_value: float

    def to_dict(self) -> dict:
        return asdict(self)


def sampling_plan(n: int, k: int, g: int, s_max: int, delta: float, zeta: float,
                  prof: SubGaussianProfile = GAUSSIAN) -> SamplingPlan:
    ms = rip_bound_value(n, k, delta, zeta, prof)
    mgs = grip_bound_value(g, s_max, k, delta, zeta, prof)
    return SamplingPlan(n, k, g, s_max, delta, zeta, theta_of(delta), prof.c,
                        ceil(ms), ceil(mgs), ms, mgs)


def generate_matrix(m: int, n: int, seed: int, distribution: str = "gaussian") -> np.ndarray:
    """``m x n`` matrix of i.i.d. unit-variance entries scaled by ``1/sqrt(m)``.

    Uses the counter-based Philox generator keyed by ``seed``, so the same seed
    always gives the same matrix.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    if distribution == "gaussian":
        X = rng.standard_normal((m, n))
    elif distribution == "rademacher":
        X = rng.choice(np.array([-1.0, 1.0]), size=(m, n))
    else:
        raise ValueError(f"unknown distribution {distribution!r}")
    return X / sqrt(m)
