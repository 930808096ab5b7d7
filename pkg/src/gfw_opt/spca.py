"""Sparse PCA: maximize ``x'Ax`` over unit vectors with at most ``k`` nonzeros.

GFW runs on the shifted objective ``x'(A + sigma I)x``, which only adds the
constant ``sigma`` on the feasible set but makes the objective convex when
``sigma > -lambda_min(A)``. Reported objectives have the shift removed.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import GfwConfig, RunResult, check_symmetric, quadratic_objective, shift_objective
from .engine import check_stationarity, run_gfw
from .errors import TooLarge
from .linalg import estimate_lambda_min, jacobi_eigh
from .oracles import SphereCardinalityOracle

DEFAULT_GAMMA = 0.1
BRUTE_FORCE_MAX_N = 12
BRUTE_FORCE_MAX_SUPPORTS = 1000


def default_sigma(a, gamma: float = DEFAULT_GAMMA) -> float:
    return max(0.0, -estimate_lambda_min(a)) + gamma


@dataclass
class SpcaProblem:
    a: np.ndarray
    k: int
    sigma: Optional[float] = None

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        check_symmetric(self.a)
        n = self.a.shape[0]
        if not 1 <= self.k <= n:
            raise ValueError(f"k must be in 1..{n}, got {self.k}")
        if self.sigma is None:
            self.sigma = default_sigma(self.a)
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def oracle(self) -> SphereCardinalityOracle:
        return SphereCardinalityOracle(self.n, self.k)

    def objective(self):
        """Shifted quadratic ``x'(A + sigma I)x``."""
        return shift_objective(quadratic_objective(self.a), self.sigma)


def run_spca(p: SpcaProblem, x0, cfg: GfwConfig = GfwConfig()) -> RunResult:
    """GFW from ``x0``; the trace reports ``x'Ax`` (shift removed)."""
    res = run_gfw(p.objective(), p.oracle(), x0, cfg)
    return RunResult(res.final_iterate, res.trace.shifted(-p.sigma))


def is_fixed_point(p: SpcaProblem, x, tol: float = 1e-8) -> bool:
    return check_stationarity(p.objective(), p.oracle(), x, tol)


def brute_force_spca(a, k: int):
    """Global optimum over all size-``k`` supports by eigen-decomposing each block.

    Ties keep the first support in lexicographic order. Returns ``(x, value)``.
    """
    a = np.asarray(a, dtype=float)
    check_symmetric(a)
    n = a.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    count = math.comb(n, k)
    if n > BRUTE_FORCE_MAX_N or count > BRUTE_FORCE_MAX_SUPPORTS:
        raise TooLarge(f"n={n}, C(n,k)={count} exceeds the brute-force limits")
    best_val = -math.inf
    best_x = None
    for support in itertools.combinations(range(n), k):
        idx = list(support)
        w, V = jacobi_eigh(a[np.ix_(idx, idx)])
        if w[-1] > best_val:
            best_val = float(w[-1])
            best_x = np.zeros(n)
            best_x[idx] = V[:, -1]
    return best_x, best_val


def random_feasible_start(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random support of size ``k`` with normalized Gaussian entries."""
    x = np.zeros(n)
    support = np.sort(rng.choice(n, size=k, replace=False))
    while True:
        v = rng.standard_normal(k)
        nrm = float(np.sqrt(v @ v))
        if nrm > 0:
            break
    x[support] = v / nrm
    return x


@dataclass
class MultistartResult:
    best: RunResult
    best_index: int
    runs: list
    starts: list


def spca_multistart(p: SpcaProblem, restarts: int, cfg: GfwConfig = GfwConfig(), seed: int = 0) -> MultistartResult:
    """Best of ``restarts`` runs from seeded random starts (first wins ties)."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    rng = np.random.default_rng(seed)
    starts = [random_feasible_start(p.n, p.k, rng) for _ in range(restarts)]
    runs = [run_spca(p, x0, cfg) for x0 in starts]
    best = max(range(restarts), key=lambda i: (runs[i].final_objective, -i))
    return MultistartResult(runs[best], best, runs, starts)


def support_of(x) -> list:
    return [int(i) for i in np.flatnonzero(x)]


CSV_HEADER = ["restart", "final_obj", "iters", "status", "support"]


def runs_to_csv(runs, global_value: Optional[float] = None) -> str:
    """One row per restart; with ``global_value`` a ``gap`` column is appended."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER + (["gap"] if global_value is not None else []))
    for i, r in enumerate(runs):
        row = [i, repr(r.final_objective), r.trace.n_iter, r.status.value,
               " ".join(str(j) for j in support_of(r.final_iterate))]
        if global_value is not None:
            row.append(repr(global_value - r.final_objective))
        w.writerow(row)
    return buf.getvalue()
