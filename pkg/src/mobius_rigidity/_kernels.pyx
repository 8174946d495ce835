# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Semantics match ``_kernels_py`` exactly."""

import numpy as np
from libc.math cimport fabs, sqrt


cdef inline double _lorentz(const double[:, ::1] V, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef Py_ssize_t k, last = V.shape[1] - 1
    cdef double s = 0.0
    for k in range(last):
        s += V[i, k] * V[j, k]
    return s - V[i, last] * V[j, last]


def lorentz_gram(V):
    cdef const double[:, ::1] v = np.ascontiguousarray(V, dtype=np.float64)
    cdef Py_ssize_t m = v.shape[0], i, j
    out = np.empty((m, m), dtype=np.float64)
    cdef double[:, ::1] g = out
    cdef double s
    with nogil:
        for i in range(m):
            for j in range(i, m):
                s = _lorentz(v, i, j)
                g[i, j] = s
                g[j, i] = s
    return out


def gram_discrepancy(A, B):
    cdef const double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef const double[:, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    if a.shape[0] != b.shape[0] or a.shape[1] != b.shape[1]:
        raise ValueError(f"shape mismatch {np.shape(A)} vs {np.shape(B)}")
    cdef Py_ssize_t m = a.shape[0], i, j, bi = 0, bj = 0
    cdef double best = 0.0, d
    if m == 0:
        return 0.0, -1, -1
    with nogil:
        for i in range(m):
            for j in range(i, m):
                d = fabs(_lorentz(a, i, j) - _lorentz(b, i, j))
                if d > best:
                    best = d
                    bi = i
                    bj = j
    return best, bi, bj


def cross_ratio_discrepancy(GA, GB):
    cdef const double[:, ::1] ga = np.ascontiguousarray(GA, dtype=np.float64)
    cdef const double[:, ::1] gb = np.ascontiguousarray(GB, dtype=np.float64)
    cdef Py_ssize_t m = ga.shape[0], a, b, c, d
    cdef Py_ssize_t wa = 0, wb = 0, wc = 0, wd = 0
    cdef double best = -1.0, ra, rb, disc, scale
    if m < 4:
        raise ValueError("need at least four points")
    with nogil:
        for a in range(m):
            for b in range(m):
                if b == a:
                    continue
                for c in range(m):
                    if c == a or c == b:
                        continue
                    for d in range(m):
                        if d == a or d == b or d == c:
                            continue
                        ra = sqrt((ga[a, b] * ga[c, d]) / (ga[a, c] * ga[b, d]))
                        rb = sqrt((gb[a, b] * gb[c, d]) / (gb[a, c] * gb[b, d]))
                        scale = ra if ra > rb else rb
                        if scale < 1.0:
                            scale = 1.0
                        disc = fabs(ra - rb) / scale
                        if disc > best:
                            best = disc
                            wa = a
                            wb = b
                            wc = c
                            wd = d
    return best, wa, wb, wc, wd
