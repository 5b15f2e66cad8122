# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels.

Mirrors _ref.py; see that module for the parameter contracts. The state
recursion and the forced-sum enumeration are the two loops that dominate
runtime for long horizons and deep input enumerations.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs, isfinite

cnp.import_array()

BACKEND_NAME = "compiled"


def lti_recursion(const double[:, ::1] A, const double[::1] x0,
                  const double[:, ::1] bu):
    cdef Py_ssize_t L = bu.shape[0] + 1
    cdef Py_ssize_t n = x0.shape[0]
    states_arr = np.empty((L, n), dtype=np.float64)
    cdef double[:, ::1] states = states_arr
    cdef Py_ssize_t t, i, j
    cdef double acc
    cdef bint ok
    ok = True
    for i in range(n):
        states[0, i] = x0[i]
        if not isfinite(x0[i]):
            ok = False
    if not ok:
        return states_arr[:1], 0
    for t in range(1, L):
        ok = True
        for i in range(n):
            acc = bu[t - 1, i]
            for j in range(n):
                acc += A[i, j] * states[t - 1, j]
            states[t, i] = acc
            if not isfinite(acc):
                ok = False
        if not ok:
            return states_arr[: t + 1], t
    return states_arr, -1


def forced_sums(const double[:, :, ::1] tables):
    cdef Py_ssize_t k = tables.shape[0]
    cdef Py_ssize_t n_u = tables.shape[1]
    cdef Py_ssize_t p = tables.shape[2]
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t j, r, i, c, base
    for j in range(k):
        total *= n_u
    out_arr = np.empty((total, p), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(n_u):
        for c in range(p):
            out[i, c] = tables[0, i, c]
    cdef Py_ssize_t filled = n_u
    # expand in place from the back so source rows are read before overwrite
    for j in range(1, k):
        for r in range(filled - 1, -1, -1):
            base = r * n_u
            for i in range(n_u - 1, -1, -1):
                for c in range(p):
                    out[base + i, c] = out[r, c] + tables[j, i, c]
        filled *= n_u
    return out_arr


def hyperplane_distances(const double[:, ::1] values,
                         const double[:, ::1] breakpoints,
                         const long[::1] lengths):
    cdef Py_ssize_t N = values.shape[0]
    cdef Py_ssize_t p = values.shape[1]
    out_arr = np.empty(N, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t r, i, lo, hi, mid, m
    cdef double v, best, d
    for r in range(N):
        best = INFINITY
        for i in range(p):
            m = lengths[i]
            v = values[r, i]
            # binary search for the first breakpoint >= v
            lo = 0
            hi = m
            while lo < hi:
                mid = (lo + hi) // 2
                if breakpoints[i, mid] < v:
                    lo = mid + 1
                else:
                    hi = mid
            if lo > 0:
                d = fabs(v - breakpoints[i, lo - 1])
                if d < best:
                    best = d
            if lo < m:
                d = fabs(breakpoints[i, lo] - v)
                if d < best:
                    best = d
        out[r] = best
    return out_arr
