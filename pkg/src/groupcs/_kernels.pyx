# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cyclic Jacobi kernels for small dense symmetric matrices."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


cdef int _jacobi_inplace(double[:, ::1] a, Py_ssize_t n, double tol, int max_sweeps) noexcept nogil:
    """Cyclic Jacobi on the leading n x n block of ``a``; eigenvalues end on the diagonal.

    Returns the number of sweeps, or -1 if ``max_sweeps`` ran out.
    """
    cdef Py_ssize_t p, q, i
    cdef double off, fro, apq, app, aqq, theta, t, c, s, aip, aiq
    cdef int sweep
    fro = 0.0
    for p in range(n):
        for q in range(n):
            fro += a[p, q] * a[p, q]
    fro = sqrt(fro)
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        off = sqrt(2.0 * off)
        if off <= tol * fro:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if fabs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for i in range(n):
                    if i == p or i == q:
                        continue
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * aiq
                    a[p, i] = a[i, p]
                    a[i, q] = s * aip + c * aiq
                    a[q, i] = a[i, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
    return -1


def jacobi_eigvalsh(a, double tol=1e-12, int max_sweeps=100):
    """Ascending eigenvalues of the symmetric matrix ``a``."""
    cdef double[:, ::1] work = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = work.shape[0]
    if work.shape[1] != n:
        raise ValueError("matrix must be square")
    if _jacobi_inplace(work, n, tol, max_sweeps) < 0:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.sort(np.diagonal(np.asarray(work)).copy())


def subset_extreme_eigs(gram, sets, double tol=1e-12, int max_sweeps=100):
    """Smallest and largest eigenvalue of ``gram[T][:, T]`` for each index set ``T``."""
    cdef double[:, ::1] G = np.ascontiguousarray(gram, dtype=np.float64)
    cdef Py_ssize_t nsets = len(sets)
    cdef Py_ssize_t width = max([len(T) for T in sets], default=0)
    cdef cnp.int64_t[:, ::1] idx = np.zeros((nsets, max(width, 1)), dtype=np.int64)
    cdef cnp.int64_t[::1] sizes = np.zeros(nsets, dtype=np.int64)
    cdef Py_ssize_t j, r, u, v, L
    for j, T in enumerate(sets):
        L = len(T)
        sizes[j] = L
        for r in range(L):
            idx[j, r] = T[r]
    lo_arr = np.empty(nsets)
    hi_arr = np.empty(nsets)
    cdef double[::1] lo = lo_arr
    cdef double[::1] hi = hi_arr
    cdef double[:, ::1] work = np.zeros((max(width, 1), max(width, 1)))
    cdef int status = 0
    cdef double mn, mx
    with nogil:
        for j in range(nsets):
            L = sizes[j]
            for u in range(L):
                for v in range(L):
                    work[u, v] = G[idx[j, u], idx[j, v]]
            if _jacobi_inplace(work, L, tol, max_sweeps) < 0:
                status = -1
            mn = work[0, 0]
            mx = work[0, 0]
            for u in range(1, L):
                if work[u, u] < mn:
                    mn = work[u, u]
                if work[u, u] > mx:
                    mx = work[u, u]
            lo[j] = mn
            hi[j] = mx
    if status < 0:
        raise RuntimeError("Jacobi iteration did not converge")
    return lo_arr, hi_arr
