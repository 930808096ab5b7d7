"""Greedy Frank-Wolfe (unit-step conditional gradient) for convex maximization.

Each iterate is ``x_{k+1} = oracle.solve(grad g(x_k))``. Because the objective
is convex, the unit step maximizes the linear lower bound, so the objective
never decreases along the run.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import GfwConfig, GfwTrace, LinearMaxOracle, Objective, RunResult, Status
from .errors import InfeasibleStart, InsufficientData, MissingGradients, NotLpBacked, ShapeMismatch
from .lp import alternative_optima
from .oracles import LpBackedOracle

GAP_CLAMP = 1e-10
VERTEX_TOL = 1e-9


def _clamp_gap(gap: float) -> float:
    return 0.0 if -GAP_CLAMP <= gap < 0.0 else gap


def _stop_reason(repeated, gap, step, elapsed, k, cfg: GfwConfig) -> Optional[Status]:
    if repeated:
        return Status.ITERATE_REPEATED
    if cfg.tol_gap is not None and gap <= cfg.tol_gap:
        return Status.GAP_CONVERGED
    if step <= cfg.tol_step:
        return Status.STEP_CONVERGED
    if cfg.wall_time_limit is not None and elapsed >= cfg.wall_time_limit:
        return Status.TIME_LIMIT
    if k + 1 >= cfg.max_iter:
        return Status.MAX_ITER
    return None


def _check_start(obj: Objective, oracle: LinearMaxOracle, x0) -> np.ndarray:
    x = np.array(x0, dtype=float, copy=True).reshape(-1)
    if obj.dim != oracle.dim:
        raise ShapeMismatch(f"objective dimension {obj.dim} != oracle dimension {oracle.dim}")
    if x.size != oracle.dim:
        raise ShapeMismatch(f"start has {x.size} entries, expected {oracle.dim}")
    if not oracle.contains(x):
        raise InfeasibleStart("starting point is not feasible")
    return x


def run_gfw(obj: Objective, oracle: LinearMaxOracle, x0, cfg: GfwConfig = GfwConfig()) -> RunResult:
    """Run GFW from ``x0`` until the first stopping rule in ``cfg`` fires.

    Stopping priority: exact iterate repetition, then gap, then step, then
    wall time, then the iteration cap.
    """
    x = _check_start(obj, oracle, x0)
    trace = GfwTrace(gradients=[] if cfg.record_gradients else None)
    t0 = time.perf_counter()
    g = obj.value(x)
    grad = obj.grad(x)
    status = None
    k = 0
    while status is None:
        nxt = oracle.solve(grad, x)
        diff = nxt - x
        gap = _clamp_gap(float(grad @ diff))
        step = math.sqrt(float(diff @ diff))
        elapsed = time.perf_counter() - t0
        trace.record(g, gap, step, elapsed, grad if cfg.record_gradients else None)
        status = _stop_reason(np.array_equal(nxt, x), gap, step, elapsed, k, cfg)
        x = nxt
        g = obj.value(x)
        grad = obj.grad(x)
        k += 1
    trace.finish(g, status, grad if cfg.record_gradients else None)
    return RunResult(x, trace)


def fw_gap(obj: Objective, oracle: LinearMaxOracle, x) -> float:
    """``max_y grad g(x)·(y - x)`` over the feasible set (always >= 0 up to noise)."""
    x = _check_start(obj, oracle, x)
    grad = obj.grad(x)
    y = oracle.solve(grad, x)
    return _clamp_gap(float(grad @ (y - x)))


def check_stationarity(obj: Objective, oracle: LinearMaxOracle, x, tol: float) -> bool:
    return fw_gap(obj, oracle, x) <= tol


def run_gfw_strict(obj: Objective, oracle: LpBackedOracle, x0, cfg: GfwConfig = GfwConfig()) -> RunResult:
    """GFW over a polytope that refuses to stop at non-strict stationary vertices.

    When the oracle returns the current vertex again, the LP is checked for
    alternative optimal vertices one pivot away. The best unvisited one by
    objective (ties by lexicographic order) becomes the next iterate. The run
    ends at a vertex whose linear subproblem has no alternative optimum, i.e.
    ``grad g(x)·(y - x) < 0`` for every other feasible ``y``.
    """
    if not isinstance(oracle, LpBackedOracle):
        raise NotLpBacked(f"{type(oracle).__name__} cannot report alternative optima")
    x = _check_start(obj, oracle, x0)
    trace = GfwTrace(gradients=[] if cfg.record_gradients else None)
    t0 = time.perf_counter()
    visited = [x.copy()]
    g = obj.value(x)
    grad = obj.grad(x)
    status = None
    k = 0
    while status is None:
        sol = oracle.solve_full(grad)
        nxt = oracle.embed(sol.x)
        repeated = np.array_equal(nxt, x)
        if repeated:
            alt = _best_alternative(obj, oracle, grad, sol, x, visited)
            if alt is not None:
                nxt = alt
                repeated = False
        diff = nxt - x
        gap = _clamp_gap(float(grad @ diff))
        step = math.sqrt(float(diff @ diff))
        elapsed = time.perf_counter() - t0
        trace.record(g, gap, step, elapsed, grad if cfg.record_gradients else None)
        # an alternative-optimum move has zero gap; only repetition may stop on it
        gap_for_stop = gap if not (gap == 0.0 and step > 0.0) else math.inf
        status = _stop_reason(repeated, gap_for_stop, step, elapsed, k, cfg)
        x = nxt
        if not repeated and not any(np.max(np.abs(v - x)) <= VERTEX_TOL for v in visited):
            visited.append(x.copy())
        g = obj.value(x)
        grad = obj.grad(x)
        k += 1
    trace.finish(g, status, grad if cfg.record_gradients else None)
    return RunResult(x, trace)


def _best_alternative(obj, oracle: LpBackedOracle, grad, sol, x, visited):
    cands = []
    for alt in alternative_optima(oracle.lp_for(grad), sol):
        y = oracle.embed(alt.x)
        if np.max(np.abs(y - x)) <= VERTEX_TOL:
            continue
        if any(np.max(np.abs(v - y)) <= VERTEX_TOL for v in visited):
            continue
        gy = obj.value(y)
        if gy >= obj.value(x):
            cands.append((-gy, tuple(y), y))
    if not cands:
        return None
    cands.sort(key=lambda t: (t[0], t[1]))
    return cands[0][2]


# ---------------------------------------------------------------- diagnostics


@dataclass(frozen=True)
class DescentConditionReport:
    c1_margin: float
    c2_ratio: float
    holds_c1: bool
    holds_c2: bool


def verify_descent_conditions(trace: GfwTrace, alpha: float, lipschitz: float) -> DescentConditionReport:
    """Check sufficient increase (modulus ``alpha``) and the gradient-difference
    bound (constant ``lipschitz``) along a recorded run."""
    if trace.gradients is None or len(trace.gradients) < 2:
        raise MissingGradients("trace needs at least two recorded gradients")
    obj = np.asarray(trace.objective)
    steps = np.asarray(trace.step_norm)
    K = min(len(steps), len(trace.gradients) - 1)
    if K < 1:
        raise MissingGradients("trace needs at least one completed step")
    c1 = float(np.min(obj[1 : K + 1] - obj[:K] - alpha * steps[:K] ** 2))
    c2 = 0.0
    for k in range(K):
        if steps[k] < 1e-14:
            continue
        dg = trace.gradients[k + 1] - trace.gradients[k]
        c2 = max(c2, float(np.sqrt(dg @ dg)) / steps[k])
    return DescentConditionReport(c1, c2, c1 >= -1e-8, c2 <= lipschitz + 1e-6)


def monotonicity_margins(trace: GfwTrace) -> np.ndarray:
    """``g(x_{k+1}) - g(x_k)`` for every step."""
    obj = np.asarray(trace.objective)
    return obj[1:] - obj[:-1]


def increase_margins(trace: GfwTrace, alpha: float) -> np.ndarray:
    """``g(x_{k+1}) - g(x_k) - gap_k - alpha |x_{k+1}-x_k|^2``; nonnegative in exact arithmetic."""
    obj = np.asarray(trace.objective)
    K = trace.n_iter
    return obj[1 : K + 1] - obj[:K] - np.asarray(trace.fw_gap) - alpha * np.asarray(trace.step_norm) ** 2


def summability_margins(trace: GfwTrace, alpha: float) -> np.ndarray:
    """Slack in ``min_{i<=k}(gap_i + alpha d_i^2) <= (g(x_{k+1}) - g(x_0)) / (k+1)``."""
    obj = np.asarray(trace.objective)
    K = trace.n_iter
    terms = np.asarray(trace.fw_gap) + alpha * np.asarray(trace.step_norm) ** 2
    running_min = np.minimum.accumulate(terms)
    avg_gain = (obj[1 : K + 1] - obj[0]) / np.arange(1, K + 1)
    return avg_gain - running_min


class Regime(str, enum.Enum):
    FINITE = "Finite"
    LINEAR = "Linear"
    SUBLINEAR = "Sublinear"


@dataclass(frozen=True)
class RateEstimate:
    theta_hat: float
    regime: Regime
    r_squared: float
    tail_fraction: float


def _fit(x, y):
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(resid @ resid)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)
    return float(slope), r2


def estimate_rate_exponent(
    trace: Optional[GfwTrace], distances, tail_fraction: float = 0.5, r2_threshold: float = 0.98
) -> RateEstimate:
    """Classify the convergence regime of ``distances[k-1] = |x_k - x_bar|``, k = 1..N.

    Geometric decay (log-distance linear in k) is Linear with theta 0.5;
    otherwise a power law ``k^-p`` gives ``theta = (1+p) / (1+2p)``. A run
    that stopped on an exactly repeated iterate is Finite with theta 0.
    """
    if trace is not None and trace.status is Status.ITERATE_REPEATED:
        return RateEstimate(0.0, Regime.FINITE, 1.0, tail_fraction)
    d = np.asarray(distances, dtype=float)
    if d.size < 10:
        raise InsufficientData(f"need at least 10 iterations, got {d.size}")
    k = np.arange(1, d.size + 1, dtype=float)
    start = d.size - max(3, int(math.ceil(tail_fraction * d.size)))
    k, d = k[start:], d[start:]
    ok = np.isfinite(d) & (d > 0)
    k, d = k[ok], d[ok]
    if d.size < 3:
        raise InsufficientData("too few positive distances in the tail")
    logd = np.log(d)
    _, r2_lin = _fit(k, logd)
    slope_pow, r2_pow = _fit(np.log(k), logd)
    if r2_lin >= r2_threshold and r2_lin >= r2_pow:
        return RateEstimate(0.5, Regime.LINEAR, r2_lin, tail_fraction)
    if slope_pow < 0:
        theta = (slope_pow - 1.0) / (2.0 * slope_pow - 1.0)
    else:
        theta = math.nextafter(1.0, 0.0)
    return RateEstimate(theta, Regime.SUBLINEAR, r2_pow, tail_fraction)
