"""Constrained norm minimization ``min ||z||_P  s.t.  ||y - A z||_2 <= eps``.

Douglas-Rachford splitting alternates the proximal map of the penalty with
the Euclidean projection onto the feasible set. The projection works in the
singular basis of ``A``: for an infeasible ``v`` it solves a scalar secular
equation for the multiplier of the constraint.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .errors import DimensionMismatch, InfeasibleProblem, UnsupportedNorm
from .group_model import GroupPartition
from .norms import NormSpec, eval_norm

RANK_RTOL = 1e-12


# -- proximal maps -------------------------------------------------------------

def soft_threshold(v: np.ndarray, t) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def block_soft_threshold(v: np.ndarray, p: GroupPartition, t) -> np.ndarray:
    """Shrink every group block of ``v`` towards zero by ``t`` (scalar or per group)."""
    norms = np.sqrt(np.bincount(p.group_of, weights=v * v, minlength=p.g))
    t = np.broadcast_to(np.asarray(t, dtype=float), norms.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(norms > t, 1.0 - t / np.where(norms > 0, norms, 1.0), 0.0)
    return v * scale[p.group_of]


def prox_penalty(spec: NormSpec, p: GroupPartition, v, tau: float) -> np.ndarray:
    """``argmin_z 1/2 ||z - v||^2 + tau ||z||_P`` for l1, group and sparse group LASSO."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    v = np.asarray(v, dtype=float)
    if v.shape != (p.n,):
        raise DimensionMismatch(f"vector of shape {v.shape}, partition has n={p.n}")
    if spec.variant == "l1":
        return soft_threshold(v, tau)
    if spec.variant == "gl":
        t = tau if spec.weights is None else tau * np.asarray(spec.weights)
        return block_soft_threshold(v, p, t)
    if spec.variant == "sgl":
        return block_soft_threshold(soft_threshold(v, (1.0 - spec.mu) * tau), p, spec.mu * tau)
    raise UnsupportedNorm("no proximal map is shipped for tree norms")


# -- feasible set ----------------------------------------------------------------

class FeasibleSet:
    """``{z : ||y - A z||_2 <= eps}`` with a cached thin SVD of ``A``."""

    def __init__(self, A, y, eps: float):
        A = np.asarray(A, dtype=float)
        y = np.asarray(y, dtype=float)
        if A.ndim != 2 or y.shape != (A.shape[0],):
            raise DimensionMismatch(f"A is {A.shape}, y is {y.shape}")
        if eps < 0:
            raise ValueError("eps must be nonnegative")
        self.A, self.y, self.eps = A, y, float(eps)
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
        keep = s > RANK_RTOL * (s[0] if s.size else 0.0)
        self.s = s[keep]
        self.U = U[:, keep]
        self.Vt = Vt[keep]
        self.y_coef = self.U.T @ y
        self.y_perp = float(np.linalg.norm(y - self.U @ self.y_coef))
        scale = max(1.0, float(np.linalg.norm(y)))
        self._tol = 1e-10 * scale
        if self.y_perp > self.eps + self._tol:
            raise InfeasibleProblem(
                f"y is {self.y_perp:.3g} away from the range of A, more than eps={self.eps:.3g}")

    def residual(self, z) -> float:
        return float(np.linalg.norm(self.y - self.A @ z))

    def least_norm_point(self) -> np.ndarray:
        return self.Vt.T @ (self.y_coef / self.s)

    def project(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        vc = self.Vt @ v
        rho = self.s * vc - self.y_coef
        excess2 = float(rho @ rho) + self.y_perp ** 2
        if excess2 <= self.eps ** 2:
            return v.copy()
        target = self.eps ** 2 - self.y_perp ** 2
        if self.eps == 0.0 or target <= (1e-12 * self.eps) ** 2:
            # Degenerate ball: least-norm correction onto {Az = y}.
            return v - self.Vt.T @ (rho / self.s)
        lam = _secular_root(rho, self.s, target)
        zc = (vc + lam * self.s * self.y_coef) / (1.0 + lam * self.s ** 2)
        return v + self.Vt.T @ (zc - vc)


def _secular_root(rho: np.ndarray, s: np.ndarray, target: float,
                  rtol: float = 1e-14, max_iter: int = 200) -> float:
    """Positive root of ``sum rho_i^2 / (1 + lam s_i^2)^2 = target``.

    Newton on ``phi(lam)^(-1/2) - target^(-1/2)`` (nearly linear in ``lam``),
    kept inside a bisection bracket.
    """
    r2 = rho * rho
    s2 = s * s

    def phi(lam):
        w = 1.0 / (1.0 + lam * s2)
        return float(r2 @ (w * w)), float(-2.0 * r2 @ (s2 * w ** 3))

    inv_t = 1.0 / sqrt(target)
    lo = 0.0
    hi = (sqrt(float(r2.sum())) * inv_t - 1.0) / float(s2.min())
    lam = 0.0
    for _ in range(max_iter):
        val, der = phi(lam)
        psi = val ** -0.5 - inv_t
        if psi < 0:
            lo = lam
        else:
            hi = lam
        if abs(psi) <= rtol * inv_t or hi - lo <= rtol * max(hi, 1e-300):
            break
        dpsi = -0.5 * val ** -1.5 * der
        step = lam - psi / dpsi if dpsi > 0 else hi + 1.0
        lam = step if lo < step < hi else 0.5 * (lo + hi)
    return lam


def project_feasible(factorization: FeasibleSet, v) -> np.ndarray:
    """Euclidean projection of ``v`` onto the set described by ``factorization``."""
    return factorization.project(v)


# -- problems and the Douglas-Rachford loop ---------------------------------------

@dataclass(frozen=True)
class RecoveryProblem:
    A: np.ndarray
    y: np.ndarray
    eps: float
    spec: NormSpec
    partition: GroupPartition

    def __post_init__(self):
        A = np.asarray(self.A)
        if A.shape != (np.asarray(self.y).shape[0], self.partition.n):
            raise DimensionMismatch(
                f"A is {A.shape}, y has {np.asarray(self.y).shape[0]} rows, n={self.partition.n}")
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")


@dataclass(frozen=True)
class SolverOptions:
    tau: float = 1.0
    relax: float = 1.0
    max_iters: int = 20_000
    tol: float = 1e-9


@dataclass
class RecoveryResult:
    x_hat: np.ndarray
    iterations: int
    primal_residual: float
    dual_residual: float
    constraint_slack: float
    objective: float
    converged: bool
    history: list = field(default_factory=list, repr=False)

    def diagnostics(self) -> dict:
        return {
            "iterations": self.iterations,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "constraint_slack": self.constraint_slack,
            "objective": self.objective,
            "converged": self.converged,
        }


def recover(prob: RecoveryProblem, opts: SolverOptions | None = None) -> RecoveryResult:
    """Douglas-Rachford on (penalty prox, feasible-set projection).

    The projected iterate is always feasible; it is returned on convergence.
    Without convergence the feasible iterate of smallest objective is returned
    with ``converged=False``.
    """
    opts = opts or SolverOptions()
    spec, p = prob.spec, prob.partition
    if spec.variant == "tree":
        raise UnsupportedNorm("the solver handles l1, group and sparse group LASSO penalties")
    C = FeasibleSet(prob.A, prob.y, prob.eps)
    w = C.least_norm_point()
    z_prev = prox_penalty(spec, p, w, opts.tau)
    best_x, best_obj = None, np.inf
    primal = dual = np.inf
    it = 0
    converged = False
    x = w
    for it in range(1, opts.max_iters + 1):
        z = prox_penalty(spec, p, w, opts.tau)
        x = C.project(2.0 * z - w)
        w = w + opts.relax * (x - z)
        primal = float(np.linalg.norm(x - z))
        dual = float(np.linalg.norm(z - z_prev)) / opts.tau
        z_prev = z
        scale = 1.0 + float(np.linalg.norm(x))
        if max(primal, dual) < opts.tol * scale:
            converged = True
            break
        obj = eval_norm(spec, p, x)
        if obj < best_obj:
            best_obj, best_x = obj, x
    if not converged and best_x is not None:
        x = best_x
    return RecoveryResult(
        x_hat=x,
        iterations=it,
        primal_residual=primal,
        dual_residual=dual,
        constraint_slack=prob.eps - C.residual(x),
        objective=eval_norm(spec, p, x),
        converged=converged,
    )
