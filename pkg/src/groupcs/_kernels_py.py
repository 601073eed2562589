"""Numpy fallback for the Jacobi kernels, vectorized over batches of equal-size matrices."""
from __future__ import annotations

import numpy as np


def _jacobi_batch(a: np.ndarray, tol: float, max_sweeps: int) -> np.ndarray:
    """Cyclic Jacobi applied to every matrix of the ``(B, n, n)`` stack ``a`` at once."""
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[-1]
    fro = np.sqrt((a * a).sum(axis=(1, 2)))
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * (a[:, iu[0], iu[1]] ** 2).sum(axis=1))
        if np.all(off <= tol * fro):
            return np.diagonal(a, axis1=1, axis2=2).copy()
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                active = apq != 0.0
                if not active.any():
                    continue
                safe = np.where(active, apq, 1.0)
                theta = (a[:, q, q] - a[:, p, p]) / (2.0 * safe)
                big = np.abs(theta) > 1e150          # theta**2 would overflow
                th = np.where(big, 1.0, theta)
                t = np.where(th >= 0, 1.0, -1.0) / (np.abs(th) + np.sqrt(th * th + 1.0))
                t = np.where(big, 0.5 / np.where(big, theta, 1.0), t)
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cp = a[:, :, p].copy()
                cq = a[:, :, q]
                a[:, :, p] = c[:, None] * cp - s[:, None] * cq
                a[:, :, q] = s[:, None] * cp + c[:, None] * cq
                rp = a[:, p, :].copy()
                rq = a[:, q, :]
                a[:, p, :] = c[:, None] * rp - s[:, None] * rq
                a[:, q, :] = s[:, None] * rp + c[:, None] * rq
                a[:, p, q] = 0.0
                a[:, q, p] = 0.0
    raise RuntimeError("Jacobi iteration did not converge")


def jacobi_eigvalsh(a, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Ascending eigenvalues of the symmetric matrix ``a``."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    return np.sort(_jacobi_batch(a[None], tol, max_sweeps)[0])


def subset_extreme_eigs(gram, sets, tol: float = 1e-12, max_sweeps: int = 100):
    """Smallest and largest eigenvalue of ``gram[T][:, T]`` for each index set ``T``."""
    gram = np.asarray(gram, dtype=np.float64)
    lo = np.empty(len(sets))
    hi = np.empty(len(sets))
    by_size: dict[int, list[int]] = {}
    for j, T in enumerate(sets):
        by_size.setdefault(len(T), []).append(j)
    for size, rows in by_size.items():
        idx = np.array([list(sets[j]) for j in rows], dtype=np.int64)
        sub = gram[idx[:, :, None], idx[:, None, :]]
        eig = _jacobi_batch(sub, tol, max_sweeps)
        lo[rows] = eig.min(axis=1)
        hi[rows] = eig.max(axis=1)
    return lo, hi
