"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def pivot(T, r, c):
    """In-place Gauss-Jordan pivot of tableau ``T`` on entry ``(r, c)``."""
    row = T[r] / T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, row)
    T[r] = row
    T[:, c] = 0.0
    T[r, c] = 1.0


def bcm_sweep_dense(A, B, zero_tol):
    """One sequential BCM sweep over the rows of ``B``, in place.

    Returns the Frobenius norm of the change. Rows whose block gradient is
    below ``zero_tol`` are left as they are.
    """
    n = B.shape[0]
    change = 0.0
    for i in range(n):
        g = A[i, :i] @ B[:i] + A[i, i + 1:] @ B[i + 1:]
        nrm = np.sqrt(g @ g)
        if nrm < zero_tol:
            continue
        new = g / nrm
        d = new - B[i]
        change += d @ d
        B[i] = new
    return float(np.sqrt(change))


def bcm_sweep_csr(data, indices, indptr, B, zero_tol):
    n = B.shape[0]
    change = 0.0
    for i in range(n):
        lo, hi = indptr[i], indptr[i + 1]
        cols = indices[lo:hi]
        vals = data[lo:hi]
        keep = cols != i
        g = vals[keep] @ B[cols[keep]]
        nrm = np.sqrt(g @ g)
        if nrm < zero_tol:
            continue
        new = g / nrm
        d = new - B[i]
        change += d @ d
        B[i] = new
    return float(np.sqrt(change))


def bland_run(T, basis, max_steps, zero_rc, pivot_tol, feas_tol):
    """Up to ``max_steps`` Bland pivots on an optimality tableau, in place.

    ``T`` has the constraint rows first, the reduced-cost row last and the
    right-hand side as last column. Returns ``(code, steps)`` with code 0
    optimal, 1 unbounded, 2 step limit, 3 pivot too small.
    """
    m = T.shape[0] - 1
    N = T.shape[1] - 1
    steps = 0
    while True:
        neg = np.flatnonzero(T[m, :N] < -zero_rc)
        if neg.size == 0:
            return 0, steps
        if steps >= max_steps:
            return 2, steps
        j = int(neg[0])
        col = T[:m, j]
        pos = np.flatnonzero(col > pivot_tol)
        if pos.size == 0:
            return 1, steps
        ratios = np.maximum(T[pos, N], 0.0) / col[pos]
        rmin = ratios.min()
        ties = pos[ratios <= rmin + 1e-12 * (1.0 + rmin)]
        r = int(ties[np.argmin(basis[ties])])
        if T[r, j] < pivot_tol:
            return 3, steps
        pivot(T, r, j)
        basis[r] = j
        steps += 1
        rhs = T[:m, N]
        rhs[(rhs < 0.0) & (rhs > -feas_tol)] = 0.0
