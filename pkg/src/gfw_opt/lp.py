"""Dense two-phase primal simplex for ``min c'x  s.t.  Ax = b, x >= 0``.

Bland's rule is always on: the entering variable is the lowest-index column
with a negative reduced cost, and ratio-test ties leave by lowest basic index.
The tableau is rebuilt from the basis every ``REFACTOR_EVERY`` pivots, and the
reported vertex is always recomputed from the (sorted) final basis so that
equal bases give bitwise-equal points.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .errors import NumericalBreakdown, TooLarge

ZERO_RC = 1e-9
PIVOT_TOL = 1e-11
FEAS_TOL = 1e-9
REFACTOR_EVERY = 50


@dataclass(frozen=True)
class LpStandardForm:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        c = np.asarray(self.c, dtype=float).reshape(-1)
        if a.shape[0] == 1 and a.shape[1] == 0:
            a = a.reshape(0, c.size)
        m, n = a.shape
        if b.size != m or c.size != n:
            raise ValueError(f"inconsistent shapes A{a.shape}, b({b.size}), c({c.size})")
        if m > n:
            raise ValueError("standard form requires m <= n")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise ValueError("LP data must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]

    def with_cost(self, c) -> "LpStandardForm":
        return LpStandardForm(self.a, self.b, c)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "A": self.a.reshape(-1).tolist(),
            "b": self.b.tolist(),
            "c": self.c.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "LpStandardForm":
        m, n = int(d["m"]), int(d["n"])
        a = np.asarray(d["A"], dtype=float).reshape(m, n)
        return cls(a, d["b"], d["c"])

    @classmethod
    def from_json(cls, text: str) -> "LpStandardForm":
        return cls.from_dict(json.loads(text))


class LpStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass
class LpSolution:
    status: LpStatus
    x: np.ndarray
    objective: float
    basis: tuple
    reduced_costs: np.ndarray
    has_alternative_optima: bool
    dual: Optional[np.ndarray] = None
    rows: tuple = ()
    pivots: int = 0


@dataclass(frozen=True)
class PhaseOne:
    """Outcome of Phase I; depends only on ``(A, b)``, never on ``c``."""

    feasible: bool
    rows: tuple = ()
    basis: tuple = ()
    pivots: int = 0


@dataclass
class _Run:
    status: LpStatus
    basis: list
    pivots: int
    T: np.ndarray = field(repr=False, default=None)


def _tableau(M, rhs, cost, basis):
    m, N = M.shape
    T = np.empty((m + 1, N + 1))
    if m:
        Bm = M[:, basis]
        try:
            body = np.linalg.solve(Bm, np.column_stack([M, rhs]))
        except np.linalg.LinAlgError as exc:
            raise NumericalBreakdown("singular basis during refactorization") from exc
        T[:m] = body
        T[:m, basis] = np.eye(m)
        cb = cost[basis]
        T[m, :N] = cost - cb @ body[:, :N]
        T[m, N] = -(cb @ body[:, N])
        T[m, basis] = 0.0
        np.clip(T[:m, N], 0.0, None, out=T[:m, N], where=T[:m, N] > -FEAS_TOL)
    else:
        T[0, :N] = cost
        T[0, N] = 0.0
    return T


def _bland_loop(M, rhs, cost, basis, max_pivots=None):
    """Primal simplex from a feasible ``basis`` (list, modified in place).

    The tableau rebuilt at each refactorization depends only on the basis, so
    meeting the same basis twice there means the pivots loop forever; that is
    reported as a breakdown. ``max_pivots`` is a backstop on top of this.
    """
    m, N = M.shape
    if max_pivots is None:
        max_pivots = 1000 * (m + N) + 10_000
    T = _tableau(M, rhs, cost, basis)
    bas = np.asarray(basis, dtype=np.int64)
    pivots = 0
    seen = set()
    while True:
        code, steps = kernels.bland_run(T, bas, REFACTOR_EVERY, ZERO_RC, PIVOT_TOL, FEAS_TOL)
        pivots += steps
        basis[:] = bas.tolist()
        if code == 0:
            return _Run(LpStatus.OPTIMAL, basis, pivots, T)
        if code == 1:
            return _Run(LpStatus.UNBOUNDED, basis, pivots, T)
        if code == 3:
            raise NumericalBreakdown(f"pivot magnitude below {PIVOT_TOL:g}")
        if pivots > max_pivots:
            raise NumericalBreakdown(f"no termination after {pivots} pivots")
        key = bas.tobytes()
        if key in seen:
            raise NumericalBreakdown(f"basis repeated after {pivots} pivots (cycling)")
        seen.add(key)
        T = _tableau(M, rhs, cost, basis)


def phase_one(a, b) -> PhaseOne:
    """Find a feasible basis for ``Ax = b, x >= 0`` and drop redundant rows."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = a.shape
    if m == 0:
        return PhaseOne(True, (), (), 0)
    sign = np.where(b < 0, -1.0, 1.0)
    M = np.hstack([a * sign[:, None], np.eye(m)])
    rhs = b * sign
    cost = np.concatenate([np.zeros(n), np.ones(m)])
    basis = list(range(n, n + m))
    run = _bland_loop(M, rhs, cost, basis)
    T = run.T
    infeas = -T[m, -1]
    if infeas > FEAS_TOL * (1.0 + float(np.max(np.abs(b)))):
        return PhaseOne(False, pivots=run.pivots)

    drop = []
    pivots = run.pivots
    for i in range(m):
        if basis[i] < n:
            continue
        nonbasic = np.ones(n, dtype=bool)
        nonbasic[[j for j in basis if j < n]] = False
        cand = np.flatnonzero(nonbasic & (np.abs(T[i, :n]) > FEAS_TOL))
        if cand.size:
            j = int(cand[0])
            kernels.pivot(T, i, j)
            basis[i] = j
            pivots += 1
        else:
            drop.append(basis[i] - n)
    keep = [i for i in range(m) if i not in drop]
    struct = sorted(j for j in basis if j < n)
    return PhaseOne(True, tuple(keep), tuple(struct), pivots)


def basic_solution(p: LpStandardForm, basis, rows=None) -> LpSolution:
    """Solution, duals and reduced costs associated with a given basis."""
    rows = tuple(range(p.m)) if rows is None else tuple(rows)
    basis = tuple(sorted(int(j) for j in basis))
    a = p.a[list(rows)]
    b = p.b[list(rows)]
    x = np.zeros(p.n)
    if basis:
        Bm = a[:, basis]
        try:
            xb = np.linalg.solve(Bm, b)
            y = np.linalg.solve(Bm.T, p.c[list(basis)])
        except np.linalg.LinAlgError as exc:
            raise NumericalBreakdown("singular basis") from exc
        x[list(basis)] = xb
        x[(x < 0) & (x > -FEAS_TOL)] = 0.0
    else:
        y = np.zeros(len(rows))
    d = p.c - a.T @ y
    d[list(basis)] = 0.0
    nonbasic = np.ones(p.n, dtype=bool)
    nonbasic[list(basis)] = False
    has_alt = bool(np.any(np.abs(d[nonbasic]) <= ZERO_RC))
    return LpSolution(
        status=LpStatus.OPTIMAL,
        x=x,
        objective=float(p.c @ x),
        basis=basis,
        reduced_costs=d,
        has_alternative_optima=has_alt,
        dual=y,
        rows=rows,
    )


def phase_two(p: LpStandardForm, start: PhaseOne) -> LpSolution:
    if not start.feasible:
        return LpSolution(LpStatus.INFEASIBLE, np.full(p.n, np.nan), math.nan, (), np.full(p.n, np.nan), False)
    rows = list(start.rows)
    M = p.a[rows]
    basis = list(start.basis)
    run = _bland_loop(M, p.b[rows], p.c, basis)
    sol = basic_solution(p, basis, rows)
    sol.pivots = start.pivots + run.pivots
    if run.status is LpStatus.UNBOUNDED:
        sol.status = LpStatus.UNBOUNDED
        sol.objective = -math.inf
        sol.has_alternative_optima = False
    return sol


def solve_lp(p: LpStandardForm) -> LpSolution:
    """Solve ``p`` from scratch; deterministic for identical input."""
    return phase_two(p, phase_one(p.a, p.b))


def _pivot_neighbours(p: LpStandardForm, sol: LpSolution):
    """Yield bases one Bland pivot away along zero-reduced-cost columns."""
    rows = list(sol.rows)
    M = p.a[rows]
    m = M.shape[0]
    basis = list(sol.basis)
    T = _tableau(M, p.b[rows], p.c, basis)
    nonbasic = [j for j in range(p.n) if j not in set(basis)]
    for j in nonbasic:
        if abs(sol.reduced_costs[j]) > ZERO_RC:
            continue
        col = T[:m, j]
        pos = np.flatnonzero(col > PIVOT_TOL)
        if pos.size == 0:
            continue
        ratios = np.maximum(T[pos, -1], 0.0) / col[pos]
        rmin = ratios.min()
        ties = pos[ratios <= rmin + 1e-12 * (1.0 + abs(rmin))]
        r = int(min(ties, key=lambda i: basis[i]))
        nb = list(basis)
        nb[r] = j
        yield basic_solution(p, nb, rows)


def alternative_optima(p: LpStandardForm, sol: LpSolution) -> list:
    """All distinct optimal vertices adjacent to ``sol`` via a single pivot."""
    if sol.status is not LpStatus.OPTIMAL:
        raise ValueError("alternative optima need an optimal solution")
    out = []
    if not sol.has_alternative_optima:
        return out
    for alt in _pivot_neighbours(p, sol):
        if np.max(np.abs(alt.x - sol.x), initial=0.0) <= FEAS_TOL:
            continue
        if abs(alt.objective - sol.objective) > ZERO_RC * (1.0 + abs(sol.objective)):
            continue
        if any(np.max(np.abs(alt.x - o.x)) <= FEAS_TOL for o in out):
            continue
        out.append(alt)
    return out


def alternative_vertex(p: LpStandardForm, sol: LpSolution) -> Optional[np.ndarray]:
    """A distinct optimal vertex reached by entering the lowest-index
    zero-reduced-cost column, or None when every such pivot is degenerate."""
    alts = alternative_optima(p, sol)
    return alts[0].x if alts else None


def _independent_rows(a, b):
    keep = []
    rank = 0
    for i in range(a.shape[0]):
        r = np.linalg.matrix_rank(a[keep + [i]]) if a.shape[1] else 0
        if r > rank:
            keep.append(i)
            rank = r
    return keep


def enumerate_vertices(p: LpStandardForm, max_n: int = 16, max_subsets: int = 20_000) -> list:
    """All basic feasible solutions by brute force over column subsets."""
    if p.n > max_n:
        raise TooLarge(f"n={p.n} exceeds {max_n}")
    keep = _independent_rows(p.a, p.b)
    a = p.a[keep]
    b = p.b[keep]
    if p.m and np.linalg.matrix_rank(np.column_stack([p.a, p.b])) > len(keep):
        return []
    r = len(keep)
    if math.comb(p.n, r) > max_subsets:
        raise TooLarge(f"C({p.n},{r}) exceeds {max_subsets}")
    out = []
    for cols in itertools.combinations(range(p.n), r):
        x = np.zeros(p.n)
        if r:
            Bm = a[:, cols]
            s = np.linalg.svd(Bm, compute_uv=False)
            if s[-1] <= 1e-10 * max(1.0, s[0]):
                continue
            xb = np.linalg.solve(Bm, b)
            if np.any(xb < -FEAS_TOL):
                continue
            x[list(cols)] = np.maximum(xb, 0.0)
        if np.max(np.abs(p.a @ x - p.b), initial=0.0) > 1e-8 * (1.0 + np.max(np.abs(p.b), initial=0.0)):
            continue
        if any(np.max(np.abs(x - v)) <= FEAS_TOL for v in out):
            continue
        out.append(x)
    return out
