"""Greedy Frank-Wolfe (unit-step conditional gradient) for convex maximization.

Core pieces: :func:`run_gfw` with pluggable linear maximization oracles, a
Bland-rule simplex solver backing polyhedral oracles, convergence
diagnostics, and three applications (reweighted l1 recovery, sparse PCA,
low-rank Max-Cut).
"""

from .core import (
    GfwConfig,
    GfwTrace,
    LinearMaxOracle,
    Objective,
    RunResult,
    Status,
    quadratic_objective,
    shift_objective,
)
from .engine import (
    Regime,
    RateEstimate,
    check_stationarity,
    estimate_rate_exponent,
    fw_gap,
    run_gfw,
    run_gfw_strict,
    verify_descent_conditions,
)
from .errors import GfwError
from .kernels import BACKEND as KERNEL_BACKEND
from .lp import LpSolution, LpStandardForm, LpStatus, enumerate_vertices, solve_lp
from .oracles import (
    BoxOracle,
    FinitePointSetOracle,
    LpBackedOracle,
    ProductOfSpheresOracle,
    SphereCardinalityOracle,
    hull_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "BoxOracle",
    "FinitePointSetOracle",
    "GfwConfig",
    "GfwError",
    "GfwTrace",
    "KERNEL_BACKEND",
    "LinearMaxOracle",
    "LpBackedOracle",
    "LpSolution",
    "LpStandardForm",
    "LpStatus",
    "Objective",
    "ProductOfSpheresOracle",
    "RateEstimate",
    "Regime",
    "RunResult",
    "SphereCardinalityOracle",
    "Status",
    "check_stationarity",
    "enumerate_vertices",
    "estimate_rate_exponent",
    "fw_gap",
    "hull_oracle",
    "quadratic_objective",
    "run_gfw",
    "run_gfw_strict",
    "shift_objective",
    "solve_lp",
    "verify_descent_conditions",
]
