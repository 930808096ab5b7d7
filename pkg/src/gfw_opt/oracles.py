"""Linear maximization oracles for the feasible sets used by the applications.

Every oracle breaks ties towards the smallest index so that repeated queries
with the same vector return bitwise-identical points.
"""

from __future__ import annotations

import threading
from typing import Optional

import numpy as np

from .core import FEAS_TOL
from .errors import OracleFailure, ShapeMismatch
from .lp import LpSolution, LpStandardForm, LpStatus, PhaseOne, phase_one, phase_two

ZERO_GRAD = 1e-14


class BoxOracle:
    """Axis-aligned box ``lo <= x <= hi``; zero cost coordinates go to ``lo``."""

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        if self.lo.shape != self.hi.shape or np.any(self.lo > self.hi):
            raise ValueError("invalid box bounds")
        self.dim = self.lo.size

    def solve(self, c, previous=None):
        return np.where(np.asarray(c) > 0, self.hi, self.lo)

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return x.shape == self.lo.shape and bool(np.all(x >= self.lo - FEAS_TOL) and np.all(x <= self.hi + FEAS_TOL))


class FinitePointSetOracle:
    """Explicit list of points; returns the first maximizer."""

    def __init__(self, points):
        self.points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.points.shape[0] == 0:
            raise ValueError("point set must be nonempty")
        self.dim = self.points.shape[1]

    def solve(self, c, previous=None):
        vals = self.points @ np.asarray(c, dtype=float)
        return self.points[int(np.argmax(vals))].copy()

    def contains(self, x):
        d = np.max(np.abs(self.points - np.asarray(x, dtype=float)), axis=1)
        return bool(np.min(d) <= FEAS_TOL)


class SphereCardinalityOracle:
    """Unit vectors with at most ``k`` nonzeros.

    The maximizer of ``c·x`` keeps the ``k`` largest-magnitude entries of ``c``
    and normalizes them.
    """

    def __init__(self, n: int, k: int):
        if not 1 <= k <= n:
            raise ValueError(f"cardinality must be in 1..{n}, got {k}")
        self.dim = n
        self.k = k

    def support(self, c) -> np.ndarray:
        order = np.argsort(-np.abs(c), kind="stable")
        return np.sort(order[: self.k])

    def solve(self, c, previous=None):
        c = np.asarray(c, dtype=float)
        if c.shape != (self.dim,):
            raise ShapeMismatch(f"expected ({self.dim},), got {c.shape}")
        if np.max(np.abs(c)) < ZERO_GRAD:
            if previous is not None:
                return np.array(previous, dtype=float, copy=True)
            out = np.zeros(self.dim)
            out[0] = 1.0
            return out
        s = self.support(c)
        out = np.zeros(self.dim)
        cs = c[s]
        out[s] = cs / np.sqrt(cs @ cs)
        return out

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return (
            x.shape == (self.dim,)
            and abs(np.sqrt(x @ x) - 1.0) <= FEAS_TOL
            and int(np.count_nonzero(x)) <= self.k
        )


def normalize_rows(C: np.ndarray, previous: Optional[np.ndarray] = None) -> np.ndarray:
    """Scale each row to unit norm; near-zero rows fall back to ``previous`` or e_1."""
    norms = np.sqrt(np.einsum("ij,ij->i", C, C))
    zero = norms < ZERO_GRAD
    if not zero.any():
        return C / norms[:, None]
    out = np.empty_like(C)
    ok = ~zero
    out[ok] = C[ok] / norms[ok, None]
    if previous is not None:
        out[zero] = previous[zero]
    else:
        out[zero] = 0.0
        out[zero, 0] = 1.0
    return out


class ProductOfSpheresOracle:
    """``n`` x ``r`` matrices with unit rows, flattened row-major for the engine."""

    def __init__(self, n: int, r: int):
        if n < 1 or r < 1:
            raise ValueError("n and r must be positive")
        self.n = n
        self.r = r
        self.dim = n * r

    def solve(self, c, previous=None):
        C = np.asarray(c, dtype=float).reshape(self.n, self.r)
        prev = None if previous is None else np.asarray(previous, dtype=float).reshape(self.n, self.r)
        return normalize_rows(C, prev).reshape(-1)

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        if x.size != self.dim:
            return False
        B = x.reshape(self.n, self.r)
        return bool(np.all(np.abs(np.sqrt(np.einsum("ij,ij->i", B, B)) - 1.0) <= FEAS_TOL))


class LpBackedOracle:
    """Polytope ``{E z : A z = b, z >= 0}`` queried through the simplex solver.

    ``embed`` maps LP variables to the engine's vector: ``None`` for the
    identity, an integer ``d`` for the first ``d`` variables, a sequence of
    variable indices, or a ``dim`` x ``n`` matrix. The cost vector of the
    template LP is ignored.

    Phase I depends only on ``(A, b)`` and is computed once; each query then
    runs Phase II from that basis, exactly as a cold ``solve_lp`` would. With
    ``warm_start=True`` Phase II instead starts from the previous optimal
    basis. That is much faster for slowly changing costs but may pick a
    different vertex when the optimum is not unique.
    """

    def __init__(self, lp: LpStandardForm, embed=None, cache_last: bool = True, warm_start: bool = False):
        self.lp = lp
        n = lp.n
        self._index = None
        self._matrix = None
        if embed is None:
            self.dim = n
        elif np.isscalar(embed):
            self._index = np.arange(int(embed))
            self.dim = int(embed)
        else:
            e = np.asarray(embed)
            if e.ndim == 1:
                self._index = e.astype(int)
                self.dim = e.size
            else:
                if e.shape[1] != n:
                    raise ShapeMismatch(f"embedding has {e.shape[1]} columns, LP has {n} variables")
                self._matrix = e.astype(float)
                self.dim = e.shape[0]
        self.cache_last = cache_last
        self.warm_start = warm_start
        self.last_solution: Optional[LpSolution] = None
        self._start = None
        self._lock = threading.Lock()

    @property
    def phase_one(self):
        with self._lock:
            if self._start is None:
                self._start = phase_one(self.lp.a, self.lp.b)
        return self._start

    def lift_cost(self, c) -> np.ndarray:
        """LP minimization cost whose optimum maximizes ``c·(E z)``."""
        c = np.asarray(c, dtype=float)
        if c.shape != (self.dim,):
            raise ShapeMismatch(f"expected ({self.dim},), got {c.shape}")
        if self._matrix is not None:
            return -(self._matrix.T @ c)
        if self._index is not None:
            out = np.zeros(self.lp.n)
            out[self._index] = -c
            return out
        return -c

    def embed(self, z) -> np.ndarray:
        if self._matrix is not None:
            return self._matrix @ z
        if self._index is not None:
            return z[self._index].copy()
        return np.array(z, dtype=float, copy=True)

    def lp_for(self, c) -> LpStandardForm:
        return self.lp.with_cost(self.lift_cost(c))

    def solve_full(self, c) -> LpSolution:
        start = self.phase_one
        if not start.feasible:
            raise OracleFailure("LP feasible set is empty")
        if self.warm_start and self.last_solution is not None:
            start = PhaseOne(True, self.last_solution.rows, self.last_solution.basis, 0)
        sol = phase_two(self.lp_for(c), start)
        if sol.status is LpStatus.UNBOUNDED:
            raise OracleFailure("LP unbounded: feasible set is not compact")
        if self.warm_start:
            self.last_solution = sol
        if self.cache_last:
            self.last_solution = sol
        return sol

    def solve(self, c, previous=None):
        return self.embed(self.solve_full(c).x)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            return False
        a, b = self.lp.a, self.lp.b
        if self._matrix is None and self._index is None:
            if np.any(x < -FEAS_TOL):
                return False
            return bool(np.max(np.abs(a @ x - b), initial=0.0) <= FEAS_TOL * (1.0 + np.max(np.abs(b), initial=0.0)))
        if self._matrix is not None:
            E = self._matrix
        else:
            E = np.zeros((self.dim, self.lp.n))
            E[np.arange(self.dim), self._index] = 1.0
        start = phase_one(np.vstack([a, E]), np.concatenate([b, x]))
        return start.feasible


def hull_oracle(points) -> LpBackedOracle:
    """LP oracle over the convex hull of ``points`` (one weight per point)."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    lp = LpStandardForm(np.ones((1, P.shape[0])), [1.0], np.zeros(P.shape[0]))
    return LpBackedOracle(lp, embed=P.T)
