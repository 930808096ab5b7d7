"""Eigenvalue helpers that avoid a full eigensolve on large inputs."""

from __future__ import annotations

import numpy as np

from .core import check_symmetric, gershgorin_bound


def estimate_lambda_min(a, min_iter: int = 200, max_iter: int = 2000, rtol: float = 1e-12, seed: int = 0) -> float:
    """Smallest eigenvalue of symmetric ``a`` by power iteration on ``mu*I - a``.

    ``mu`` is the Gershgorin bound, which makes ``mu*I - a`` positive
    semidefinite so its dominant eigenvalue is ``mu - lambda_min``. At least
    ``min_iter`` iterations are always run.
    """
    check_symmetric(a, tol=1e-10)
    n = a.shape[0]
    if n == 0:
        return 0.0
    mu = gershgorin_bound(a)
    if mu == 0.0:
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    rayleigh = 0.0
    for it in range(max_iter):
        w = mu * v - a @ v
        new = float(v @ w)
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            rayleigh = 0.0
            break
        v = w / nrm
        if it >= min_iter and abs(new - rayleigh) <= rtol * mu:
            rayleigh = new
            break
        rayleigh = new
    return mu - rayleigh


def jacobi_eigh(a, tol: float = 1e-14, max_sweeps: int = 100):
    """Cyclic Jacobi eigen-decomposition of a small symmetric matrix.

    Returns ``(w, V)`` with ascending eigenvalues and orthonormal columns.
    """
    A = np.array(a, dtype=float, copy=True)
    n = A.shape[0]
    V = np.eye(n)
    scale = max(np.max(np.abs(A)), 1.0) if n else 1.0
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(A[offdiag] ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                Ap = A[:, p].copy()
                Aq = A[:, q].copy()
                A[:, p] = c * Ap - s * Aq
                A[:, q] = s * Ap + c * Aq
                Ap = A[p, :].copy()
                Aq = A[q, :].copy()
                A[p, :] = c * Ap - s * Aq
                A[q, :] = s * Ap + c * Aq
                Vp = V[:, p].copy()
                Vq = V[:, q].copy()
                V[:, p] = c * Vp - s * Vq
                V[:, q] = s * Vp + c * Vq
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]
