"""Independent reference implementations used only by the tests.

Nothing here calls the routines it is meant to check: enumeration is done
over all subsets with itertools, eigenvalues come from LAPACK, the feasible
projection uses an eigendecomposition of A'A with a grid search, and the
recovery oracle is a projected subgradient method.
"""
from __future__ import annotations

from itertools import chain, combinations

import numpy as np


def all_group_subsets(g):
    return chain.from_iterable(combinations(range(g), r) for r in range(1, g + 1))


def gks_bruteforce(groups, k):
    """Every nonempty S (as a sorted tuple) with |G_S| <= k."""
    return [S for S in all_group_subsets(len(groups)) if sum(len(groups[i]) for i in S) <= k]


def norm_direct(variant, groups, x, mu=None):
    x = np.asarray(x, dtype=float)
    if variant == "l1":
        return float(np.abs(x).sum())
    gl = sum(float(np.sqrt(sum(x[i] ** 2 for i in G))) for G in groups)
    if variant == "gl":
        return gl
    return (1 - mu) * float(np.abs(x).sum()) + mu * gl


def sparsity_index_bruteforce(x, variant, groups, k, mu=None):
    """(sigma, S) minimizing ||x - x_{G_S}|| over all admissible S, first S on ties."""
    x = np.asarray(x, dtype=float)
    best = (np.inf, None)
    for S in gks_bruteforce(groups, k):
        r = x.copy()
        for gid in S:
            r[list(groups[gid])] = 0.0
        val = norm_direct(variant, groups, r, mu)
        if val < best[0] * (1 - 1e-12) or best[1] is None:
            best = (val, S)
    return best


def conventional_top_k(x, k):
    """Indices of the k largest magnitudes, ties going to the smaller index."""
    order = sorted(range(len(x)), key=lambda i: (-abs(x[i]), i))
    return tuple(sorted(order[:k]))


def delta_lapack(A, supports):
    G = A.T @ A
    worst = 0.0
    for T in supports:
        w = np.linalg.eigvalsh(G[np.ix_(T, T)])
        worst = max(worst, w[-1] - 1.0, 1.0 - w[0])
    return worst


# -- solver oracles ---------------------------------------------------------------

class BallProjector:
    """Projection onto {z : ||Az - y|| <= eps} through z(lam) = (I + lam A'A)^-1 (v + lam A'y)."""

    def __init__(self, A, y, eps):
        self.A, self.y, self.eps = A, y, eps
        self.w, self.Q = np.linalg.eigh(A.T @ A)
        self.bh = self.Q.T @ (A.T @ y)
        self.yy = float(y @ y)

    def _r2(self, lam, vh):
        z = (vh + lam[:, None] * self.bh) / (1 + lam[:, None] * self.w)
        return (z * z) @ self.w - 2 * z @ self.bh + self.yy

    def __call__(self, v):
        if np.linalg.norm(self.A @ v - self.y) <= self.eps:
            return v
        vh = self.Q.T @ v
        e2 = self.eps ** 2
        grid = np.concatenate([[0.0], np.logspace(-12, 14, 63)])
        hi = grid[-1]
        for _ in range(12):
            ok = self._r2(grid, vh) <= e2
            j = int(np.argmax(ok)) if ok.any() else len(grid) - 1
            lo, hi = grid[max(j - 1, 0)], grid[j]
            if hi - lo <= 1e-15 * hi:
                break
            grid = np.linspace(lo, hi, 64)
        return self.Q @ ((vh + hi * self.bh) / (1 + hi * self.w))


def _subgradient(variant, group_of, g, x):
    if variant == "l1":
        return np.sign(x)
    nrm = np.sqrt(np.bincount(group_of, weights=x * x, minlength=g))[group_of]
    return np.where(nrm > 0, x / np.where(nrm > 0, nrm, 1.0), 0.0)


def projected_subgradient(A, y, eps, variant, groups, epochs=40, per_epoch=200):
    """Minimize the l1 or group norm over the ball with restarted, shrinking steps."""
    n = A.shape[1]
    group_of = np.empty(n, dtype=np.int64)
    for gid, G in enumerate(groups):
        group_of[list(G)] = gid
    P = BallProjector(A, y, eps)

    def f(z):
        return norm_direct(variant, groups, z)

    x = P(np.zeros(n))
    best, fbest = x, f(x)
    step = max(float(np.linalg.norm(x)), 1e-3)
    for _ in range(epochs):
        x = best.copy()
        for t in range(per_epoch):
            gvec = _subgradient(variant, group_of, len(groups), x)
            ng = np.linalg.norm(gvec)
            if ng == 0:
                break
            x = P(x - step * gvec / (ng * np.sqrt(t + 1)))
            fx = f(x)
            if fx < fbest:
                best, fbest = x, fx
        step *= 0.6
    return best, fbest


def in_subdifferential(variant, groups, z, u, mu=None, tol=1e-8):
    """Is ``u`` a subgradient of the norm at ``z``? (dual-ball membership per block)"""
    z = np.asarray(z, dtype=float)
    u = np.asarray(u, dtype=float)
    for G in groups:
        G = list(G)
        zg, ug = z[G], u[G]
        nz = np.linalg.norm(zg)
        if variant == "l1":
            on = zg != 0
            if np.any(np.abs(ug[on] - np.sign(zg[on])) > tol) or np.any(np.abs(ug[~on]) > 1 + tol):
                return False
        elif variant == "gl":
            if nz > 0:
                if np.linalg.norm(ug - zg / nz) > tol:
                    return False
            elif np.linalg.norm(ug) > 1 + tol:
                return False
        else:
            a = 1.0 - mu
            if nz == 0:
                rest = np.sign(ug) * np.maximum(np.abs(ug) - a, 0.0)
                if np.linalg.norm(rest) > mu + tol:
                    return False
            else:
                on = zg != 0
                want = a * np.sign(zg[on]) + mu * zg[on] / nz
                if np.any(np.abs(ug[on] - want) > tol) or np.any(np.abs(ug[~on]) > a + tol):
                    return False
    return True
