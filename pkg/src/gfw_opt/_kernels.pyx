# cython: language_level=3
"""Compiled inner loops: simplex pivoting and BCM row sweeps."""

from libc.math cimport sqrt

import numpy as np


def pivot(double[:, ::1] T, Py_ssize_t r, Py_ssize_t c):
    cdef Py_ssize_t m = T.shape[0], n = T.shape[1], i, j
    cdef double p = T[r, c], f
    for j in range(n):
        T[r, j] /= p
    T[r, c] = 1.0
    for i in range(m):
        if i == r:
            continue
        f = T[i, c]
        if f == 0.0:
            continue
        for j in range(n):
            T[i, j] -= f * T[r, j]
        T[i, c] = 0.0


def bcm_sweep_dense(double[:, ::1] A, double[:, ::1] B, double zero_tol):
    cdef Py_ssize_t n = B.shape[0], r = B.shape[1], i, j, t
    cdef double a, nrm, d, change = 0.0
    cdef double[::1] g = np.zeros(r)
    for i in range(n):
        for t in range(r):
            g[t] = 0.0
        for j in range(n):
            if j == i:
                continue
            a = A[i, j]
            if a == 0.0:
                continue
            for t in range(r):
                g[t] += a * B[j, t]
        nrm = 0.0
        for t in range(r):
            nrm += g[t] * g[t]
        nrm = sqrt(nrm)
        if nrm < zero_tol:
            continue
        for t in range(r):
            d = g[t] / nrm
            change += (d - B[i, t]) * (d - B[i, t])
            B[i, t] = d
    return sqrt(change)


def bcm_sweep_csr(double[::1] data, int[::1] indices, int[::1] indptr,
                  double[:, ::1] B, double zero_tol):
    cdef Py_ssize_t n = B.shape[0], r = B.shape[1], i, p, j, t
    cdef double a, nrm, d, change = 0.0
    cdef double[::1] g = np.zeros(r)
    for i in range(n):
        for t in range(r):
            g[t] = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            if j == i:
                continue
            a = data[p]
            for t in range(r):
                g[t] += a * B[j, t]
        nrm = 0.0
        for t in range(r):
            nrm += g[t] * g[t]
        nrm = sqrt(nrm)
        if nrm < zero_tol:
            continue
        for t in range(r):
            d = g[t] / nrm
            change += (d - B[i, t]) * (d - B[i, t])
            B[i, t] = d
    return sqrt(change)


def bland_run(double[:, ::1] T, long long[::1] basis, Py_ssize_t max_steps,
              double zero_rc, double pivot_tol, double feas_tol):
    """Up to ``max_steps`` Bland pivots on an optimality tableau.

    Returns ``(code, steps)`` with code 0 optimal, 1 unbounded, 2 step limit,
    3 pivot too small.
    """
    cdef Py_ssize_t m = T.shape[0] - 1, N = T.shape[1] - 1
    cdef Py_ssize_t steps = 0, i, j, r
    cdef double col, ratio, rmin, bound
    cdef long long best
    while True:
        j = -1
        for i in range(N):
            if T[m, i] < -zero_rc:
                j = i
                break
        if j < 0:
            return 0, steps
        if steps >= max_steps:
            return 2, steps
        rmin = -1.0
        for i in range(m):
            col = T[i, j]
            if col > pivot_tol:
                ratio = (T[i, N] if T[i, N] > 0.0 else 0.0) / col
                if rmin < 0.0 or ratio < rmin:
                    rmin = ratio
        if rmin < 0.0:
            return 1, steps
        bound = rmin + 1e-12 * (1.0 + rmin)
        r = -1
        best = 0
        for i in range(m):
            col = T[i, j]
            if col > pivot_tol:
                ratio = (T[i, N] if T[i, N] > 0.0 else 0.0) / col
                if ratio <= bound and (r < 0 or basis[i] < best):
                    r = i
                    best = basis[i]
        if T[r, j] < pivot_tol:
            return 3, steps
        pivot(T, r, j)
        basis[r] = j
        steps += 1
        for i in range(m):
            if T[i, N] < 0.0 and T[i, N] > -feas_tol:
                T[i, N] = 0.0
