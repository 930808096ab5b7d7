"""Objectives, oracle protocol, run configuration and convergence traces."""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol, runtime_checkable

import numpy as np

from .errors import NonSymmetric

FEAS_TOL = 1e-9
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class Objective:
    """A smooth strongly convex function to be maximized.

    ``alpha`` is the modulus in ``g(y) >= g(x) + grad(x)·(y-x) + alpha*|y-x|^2``
    (no factor 1/2), so for ``x'Ax`` it equals ``lambda_min(A)``.
    ``curvature`` keeps the unclamped modulus when it is known; it may be
    negative, in which case ``alpha`` is 0 until the objective is shifted.
    """

    value: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    alpha: float
    lipschitz: float
    dim: int
    curvature: Optional[float] = None


@runtime_checkable
class LinearMaxOracle(Protocol):
    """Returns a maximizer of ``c·x`` over a nonempty compact set."""

    dim: int

    def solve(self, c: np.ndarray, previous: Optional[np.ndarray] = None) -> np.ndarray: ...

    def contains(self, x: np.ndarray) -> bool: ...


class Status(str, enum.Enum):
    STEP_CONVERGED = "StepConverged"
    GAP_CONVERGED = "GapConverged"
    ITERATE_REPEATED = "IterateRepeated"
    MAX_ITER = "MaxIter"
    TIME_LIMIT = "TimeLimit"


@dataclass(frozen=True)
class GfwConfig:
    """Stopping rules for a GFW run.

    ``tol_gap=None`` disables the gap test; ``tol_step=0`` only fires on an
    exactly repeated iterate, which is already reported as IterateRepeated.
    """

    max_iter: int = 1000
    tol_step: float = 0.0
    tol_gap: Optional[float] = None
    wall_time_limit: Optional[float] = None
    record_gradients: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.tol_step < 0 or (self.tol_gap is not None and self.tol_gap < 0):
            raise ValueError("tolerances must be nonnegative")
        if self.wall_time_limit is not None and self.wall_time_limit <= 0:
            raise ValueError("wall_time_limit must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class GfwTrace:
    """Per-iteration record of a run.

    ``objective`` holds ``g(x_0), ..., g(x_K)`` (one more entry than the
    per-step lists), so ``objective[k+1] - objective[k]`` is the gain of step k.
    ``fw_gap[k]`` and ``step_norm[k]`` describe the step from x_k to x_{k+1}.
    """

    objective: list = field(default_factory=list)
    fw_gap: list = field(default_factory=list)
    step_norm: list = field(default_factory=list)
    time_s: list = field(default_factory=list)
    gradients: Optional[list] = None
    status: Optional[Status] = None

    @property
    def n_iter(self) -> int:
        return len(self.step_norm)

    def record(self, objective, gap, step, elapsed, gradient=None):
        self.objective.append(float(objective))
        self.fw_gap.append(float(gap))
        self.step_norm.append(float(step))
        self.time_s.append(float(elapsed))
        if gradient is not None:
            if self.gradients is None:
                self.gradients = []
            self.gradients.append(np.array(gradient, dtype=float, copy=True))

    def finish(self, objective, status, gradient=None):
        self.objective.append(float(objective))
        self.status = Status(status)
        if gradient is not None and self.gradients is not None:
            self.gradients.append(np.array(gradient, dtype=float, copy=True))

    def shifted(self, offset: float) -> "GfwTrace":
        """Copy with ``offset`` added to every objective value."""
        out = GfwTrace(
            objective=[v + offset for v in self.objective],
            fw_gap=list(self.fw_gap),
            step_norm=list(self.step_norm),
            time_s=list(self.time_s),
            gradients=self.gradients,
            status=self.status,
        )
        return out

    def rows(self, timing: bool = True):
        """Yield CSV rows; the final row carries only the last objective."""
        for k in range(self.n_iter):
            yield [
                k,
                _fmt(self.objective[k]),
                _fmt(self.fw_gap[k]),
                _fmt(self.step_norm[k]),
                _fmt(self.time_s[k]) if timing else "",
            ]
        if len(self.objective) > self.n_iter:
            last_t = self.time_s[-1] if self.time_s else 0.0
            yield [self.n_iter, _fmt(self.objective[-1]), "", "", _fmt(last_t) if timing else ""]

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "objective", "fw_gap", "step_norm", "time_s"])
        w.writerows(self.rows(timing))
        return buf.getvalue()

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "k": list(range(len(self.objective))),
            "objective": list(self.objective),
            "fw_gap": list(self.fw_gap),
            "step_norm": list(self.step_norm),
            "time_s": list(self.time_s) if timing else None,
            "status": self.status.value if self.status else None,
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), allow_nan=True, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "GfwTrace":
        n = len(d["fw_gap"])
        times = d.get("time_s") or [0.0] * n
        return cls(
            objective=[float(v) for v in d["objective"]],
            fw_gap=[float(v) for v in d["fw_gap"]],
            step_norm=[float(v) for v in d["step_norm"]],
            time_s=[float(v) for v in times[:n]],
            status=Status(d["status"]) if d.get("status") else None,
        )

    @classmethod
    def from_json(cls, text: str) -> "GfwTrace":
        return cls.from_dict(json.loads(text))


def _fmt(v: float) -> str:
    return repr(float(v))


@dataclass
class RunResult:
    final_iterate: np.ndarray
    trace: GfwTrace

    @property
    def status(self) -> Status:
        return self.trace.status

    @property
    def final_objective(self) -> float:
        return self.trace.objective[-1]


def gershgorin_bound(a) -> float:
    """Largest absolute row sum, an upper bound on the spectral radius."""
    if hasattr(a, "tocsr"):
        return float(np.max(np.abs(a).sum(axis=1))) if a.shape[0] else 0.0
    a = np.asarray(a, dtype=float)
    return float(np.max(np.sum(np.abs(a), axis=1))) if a.size else 0.0


def check_symmetric(a: np.ndarray, tol: float = SYMMETRY_TOL) -> None:
    if hasattr(a, "tocsr"):
        diff = abs(a - a.T)
        asym = diff.max() if diff.nnz else 0.0
    else:
        a = np.asarray(a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NonSymmetric(f"expected a square matrix, got shape {a.shape}")
        asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asym > tol:
        raise NonSymmetric(f"asymmetry {asym:.3g} exceeds {tol:g}")


def quadratic_objective(A, lambda_min: Optional[float] = None, exact_spectrum_limit: int = 1000) -> Objective:
    """``g(x) = x'Ax`` with gradient ``2Ax``.

    When ``lambda_min`` is not given it is computed exactly for n up to
    ``exact_spectrum_limit``; beyond that the modulus is left unknown.
    """
    A = np.asarray(A, dtype=float)
    check_symmetric(A)
    n = A.shape[0]
    if lambda_min is None and n <= exact_spectrum_limit:
        lambda_min = float(np.linalg.eigvalsh(A)[0]) if n else 0.0

    def value(x):
        return float(x @ (A @ x))

    def grad(x):
        return 2.0 * (A @ x)

    return Objective(
        value=value,
        grad=grad,
        alpha=max(0.0, lambda_min) if lambda_min is not None else 0.0,
        lipschitz=2.0 * gershgorin_bound(A),
        dim=n,
        curvature=lambda_min,
    )


def shift_objective(obj: Objective, sigma: float) -> Objective:
    """Add ``sigma*|x|^2``; constant on spheres, so the maximizers there do not move."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return obj
    base_value, base_grad = obj.value, obj.grad

    def value(x):
        return base_value(x) + sigma * float(x @ x)

    def grad(x):
        return base_grad(x) + 2.0 * sigma * x

    if obj.curvature is not None:
        curvature = obj.curvature + sigma
        alpha = max(0.0, curvature)
    else:
        curvature = None
        alpha = obj.alpha + sigma
    return Objective(value, grad, alpha, obj.lipschitz + 2.0 * sigma, obj.dim, curvature)
