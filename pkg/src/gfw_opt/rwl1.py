"""Reweighted l1 sparse recovery as GFW over ``{(x+, x-) >= 0 : A x+ - A x- = b}``.

Both variants maximize a convex surrogate ``g = -sum log(eps + ...)`` whose
gradient is minus the reweighting vector, so one GFW step is one weighted l1
solve. The Split variant keeps ``x+`` and ``x-`` separate inside the
logarithm and is strongly convex on bounded sets; the Coupled variant is not.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import GfwConfig, Objective, RunResult, Status
from .engine import run_gfw
from .lp import LpStandardForm
from .oracles import LpBackedOracle
from .parallel import map_ordered

SUCCESS_TOL = 1e-3
VARIANT_ORDER = ("l1", "rwl1", "rwl1_split")


@dataclass(frozen=True)
class SparseInstance:
    a: np.ndarray
    x_true: np.ndarray
    b: np.ndarray
    s: int
    seed: int

    @property
    def n(self) -> int:
        return self.a.shape[1]

    @property
    def m(self) -> int:
        return self.a.shape[0]

    def lp(self) -> LpStandardForm:
        """Split-variable LP ``[A, -A] z = b, z >= 0`` with unit cost (plain l1)."""
        return LpStandardForm(np.hstack([self.a, -self.a]), self.b, np.ones(2 * self.n))

    def to_dict(self) -> dict:
        d = self.lp().to_dict()
        d.update({"x_true": self.x_true.tolist(), "s": self.s, "seed": self.seed})
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "SparseInstance":
        lp = LpStandardForm.from_dict(d)
        n = lp.n // 2
        return cls(lp.a[:, :n].copy(), np.asarray(d["x_true"], dtype=float), lp.b, int(d["s"]), int(d["seed"]))

    @classmethod
    def from_json(cls, text: str) -> "SparseInstance":
        return cls.from_dict(json.loads(text))


def gen_sparse_instance(n: int, m: int, s: int, seed: int) -> SparseInstance:
    """Gaussian ``A`` with unit columns, ``s``-sparse Gaussian signal, ``b = A x``."""
    if not (0 <= s <= n and 1 <= m <= n):
        raise ValueError(f"need 0 <= s <= n and 1 <= m <= n, got n={n}, m={m}, s={s}")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, n))
    a /= np.sqrt(np.einsum("ij,ij->j", a, a))
    x = np.zeros(n)
    support = np.sort(rng.choice(n, size=s, replace=False))
    vals = rng.standard_normal(s)
    vals[vals == 0.0] = 1.0
    x[support] = vals
    return SparseInstance(a, x, a @ x, s, seed)


class Variant(str, enum.Enum):
    COUPLED = "rwl1"
    SPLIT = "rwl1_split"


@dataclass(frozen=True)
class RwVariant:
    kind: Variant
    epsilon: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "kind", Variant(self.kind))
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


def rw_weights(variant: RwVariant, xp, xm) -> np.ndarray:
    """Weights ``(w+, w-)`` of the next weighted l1 problem."""
    xp = np.asarray(xp, dtype=float)
    xm = np.asarray(xm, dtype=float)
    eps = variant.epsilon
    if variant.kind is Variant.SPLIT:
        return np.concatenate([1.0 / (xp + eps), 1.0 / (xm + eps)])
    w = 1.0 / (xp + xm + eps)
    return np.concatenate([w, w])


def rw_objective(variant: RwVariant, n: int) -> Objective:
    """``g(z) = -sum log(eps + .)`` over ``z = (x+, x-)``; ``grad g = -rw_weights``.

    ``alpha`` is left at 0 because the modulus depends on the region visited;
    use :func:`split_alpha` with the largest coordinate of a run.
    """
    eps = variant.epsilon
    split = variant.kind is Variant.SPLIT

    def value(z):
        if split:
            return -float(np.sum(np.log(eps + z)))
        return -float(np.sum(np.log(eps + z[:n] + z[n:])))

    def grad(z):
        return -rw_weights(variant, z[:n], z[n:])

    lipschitz = 1.0 / eps**2 if split else 2.0 / eps**2
    return Objective(value, grad, 0.0, lipschitz, 2 * n)


def split_alpha(epsilon: float, max_coord: float) -> float:
    """Strong convexity modulus of the Split surrogate on ``[0, max_coord]^{2n}``."""
    return 1.0 / (2.0 * (epsilon + max_coord) ** 2)


class _TrackingOracle:
    """Pass-through oracle remembering the largest coordinate it has returned."""

    def __init__(self, inner: LpBackedOracle, start):
        self.inner = inner
        self.dim = inner.dim
        self.max_coord = float(np.max(start, initial=0.0))

    def solve(self, c, previous=None):
        z = self.inner.solve(c, previous)
        self.max_coord = max(self.max_coord, float(np.max(z, initial=0.0)))
        return z

    def contains(self, x):
        return self.inner.contains(x)


@dataclass
class RwResult:
    x_hat: np.ndarray
    result: Optional[RunResult]
    max_coord: float
    elapsed: float

    @property
    def trace(self):
        return None if self.result is None else self.result.trace

    @property
    def status(self) -> Optional[Status]:
        return None if self.result is None else self.result.status

    @property
    def iterations(self) -> int:
        return 0 if self.result is None else self.result.trace.n_iter


def l1_start(inst: SparseInstance, oracle: Optional[LpBackedOracle] = None) -> np.ndarray:
    """Unweighted l1 solution in split variables."""
    oracle = oracle or LpBackedOracle(inst.lp())
    return oracle.solve(-np.ones(2 * inst.n))


def run_l1(inst: SparseInstance) -> RwResult:
    t0 = time.perf_counter()
    z = l1_start(inst)
    return RwResult(z[: inst.n] - z[inst.n :], None, float(np.max(z, initial=0.0)), time.perf_counter() - t0)


def run_rwl1(inst: SparseInstance, variant: RwVariant, cfg: GfwConfig = GfwConfig(tol_step=1e-3)) -> RwResult:
    """Start from the plain l1 solution and run GFW with the chosen surrogate.

    Each weighted l1 problem is warm-started from the previous optimal basis.

    Raises OracleFailure when ``A x = b`` has no solution.
    """
    t0 = time.perf_counter()
    oracle = LpBackedOracle(inst.lp(), warm_start=True)
    z0 = l1_start(inst, oracle)
    tracker = _TrackingOracle(oracle, z0)
    res = run_gfw(rw_objective(variant, inst.n), tracker, z0, cfg)
    z = res.final_iterate
    return RwResult(z[: inst.n] - z[inst.n :], res, tracker.max_coord, time.perf_counter() - t0)


def relative_error(x_hat, x_true) -> float:
    nrm = float(np.linalg.norm(x_true))
    err = float(np.linalg.norm(np.asarray(x_hat) - x_true))
    return err / nrm if nrm > 0 else err


# ---------------------------------------------------------------- experiment


def trial_seed(seed: int, s: int, trial: int) -> int:
    """Instance seed for one (s, trial) cell, independent of the rest of the grid."""
    return int(np.random.SeedSequence([seed, s, trial]).generate_state(1, dtype=np.uint32)[0])


@dataclass(frozen=True)
class TrialRecord:
    variant: str
    s: int
    trial: int
    seed: int
    recovered: bool
    cg_iters: int
    time_s: float
    rel_err: float


@dataclass
class RecoveryStats:
    variant: str
    s: int
    trials: int = 0
    successes: int = 0
    mean_iters: float = 0.0
    mean_time: float = 0.0

    @property
    def rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


def run_trial(n: int, m: int, s: int, trial: int, epsilon: float, tol: float, seed: int,
              max_iter: int = 1000) -> list:
    """All three methods on one seeded instance."""
    iseed = trial_seed(seed, s, trial)
    inst = gen_sparse_instance(n, m, s, iseed)
    cfg = GfwConfig(max_iter=max_iter, tol_step=tol)
    out = []
    runs = [("l1", run_l1(inst))]
    for kind in (Variant.COUPLED, Variant.SPLIT):
        runs.append((kind.value, run_rwl1(inst, RwVariant(kind, epsilon), cfg)))
    for name, r in runs:
        err = relative_error(r.x_hat, inst.x_true)
        out.append(TrialRecord(name, s, trial, iseed, err <= SUCCESS_TOL, r.iterations, r.elapsed, err))
    return out


def _trial_args(args):
    return run_trial(*args)


def recovery_experiment(n: int, m: int, s_grid: Sequence[int], trials: int, epsilon: float = 0.1,
                        tol: float = 1e-3, seed: int = 0, jobs: int = 1, max_iter: int = 1000) -> list:
    """Run every (s, trial) cell and return records sorted by (variant, s, trial)."""
    if trials < 1 or n < 1 or m < 1 or epsilon <= 0 or tol < 0:
        raise ValueError("invalid experiment parameters")
    tasks = [(n, m, int(s), t, epsilon, tol, seed, max_iter) for s in s_grid for t in range(trials)]
    records = [r for batch in map_ordered(_trial_args, tasks, jobs) for r in batch]
    records.sort(key=lambda r: (VARIANT_ORDER.index(r.variant), r.s, r.trial))
    return records


def summarize(records: Iterable[TrialRecord]) -> list:
    """Per-(variant, s) recovery statistics in record order."""
    cells = {}
    for r in records:
        st = cells.setdefault((r.variant, r.s), RecoveryStats(r.variant, r.s))
        st.trials += 1
        st.successes += int(r.recovered)
        st.mean_iters += r.cg_iters
        st.mean_time += r.time_s
    for st in cells.values():
        st.mean_iters /= st.trials
        st.mean_time /= st.trials
    return list(cells.values())


CSV_HEADER = ["variant", "s", "trial", "seed", "recovered", "cg_iters", "time_s", "rel_err"]


def records_to_csv(records: Iterable[TrialRecord], timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r.variant, r.s, r.trial, r.seed, int(r.recovered), r.cg_iters,
                    repr(r.time_s) if timing else "", repr(r.rel_err)])
    return buf.getvalue()
