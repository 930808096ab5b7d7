"""Low-rank Max-Cut SDP: maximize <A, BB'> over n x r matrices with unit rows.

GFW updates every row at once from ``G = (A + sigma I) B``; BCM updates rows
one at a time using the rows already refreshed in the current sweep.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from . import kernels
from .core import FEAS_TOL, GfwConfig, GfwTrace, Objective, RunResult, check_symmetric, gershgorin_bound
from .engine import _clamp_gap, _stop_reason
from .errors import InfeasibleStart, ShapeMismatch
from .linalg import estimate_lambda_min
from .oracles import ZERO_GRAD, ProductOfSpheresOracle, normalize_rows

SPARSE_DENSITY = 0.05


def default_rank(n: int) -> int:
    return int(math.ceil(math.sqrt(2 * n)))


def as_storage(a, density: float = SPARSE_DENSITY):
    """Dense array, or CSR when at most ``density`` of the entries are nonzero."""
    if sp.issparse(a):
        a = a.tocsr()
        n = a.shape[0]
        return a if a.nnz <= density * n * n else a.toarray()
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n and np.count_nonzero(a) <= density * n * n:
        return sp.csr_matrix(a)
    return a


@dataclass
class MaxcutProblem:
    a: object
    r: int
    sigma: float = 0.0

    def __post_init__(self):
        if not sp.issparse(self.a):
            self.a = np.ascontiguousarray(self.a, dtype=float)
        else:
            self.a = self.a.tocsr().astype(float)
        check_symmetric(self.a, tol=1e-10)
        if self.r < 1:
            raise ValueError("rank must be >= 1")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        n = self.n
        if sp.issparse(self.a):
            self._shifted = (self.a + self.sigma * sp.identity(n, format="csr")).tocsr()
        else:
            self._shifted = self.a + self.sigma * np.eye(n)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def shifted(self):
        """``A + sigma I`` in the same storage as ``A``."""
        return self._shifted

    def with_sigma(self, sigma: float) -> "MaxcutProblem":
        return MaxcutProblem(self.a, self.r, sigma)


def _check_factor(p: MaxcutProblem, B) -> np.ndarray:
    B = np.asarray(B, dtype=float)
    if B.shape != (p.n, p.r):
        raise ShapeMismatch(f"factor shape {B.shape} != ({p.n}, {p.r})")
    return B


def is_feasible_factor(B, tol: float = 1e-10) -> bool:
    return bool(np.all(np.abs(np.sqrt(np.einsum("ij,ij->i", B, B)) - 1.0) <= tol))


def maxcut_objective(p: MaxcutProblem, B) -> float:
    """``<A, BB'>`` via ``sum((AB) * B)``; BB' is never formed."""
    B = _check_factor(p, B)
    return float(np.sum((p.a @ B) * B))


def maxcut_flat_objective(p: MaxcutProblem, lambda_min: Optional[float] = None) -> Objective:
    """``<A + sigma I, BB'>`` as a function of the row-major flattened ``B``."""
    n, r = p.n, p.r
    As = p.shifted
    if lambda_min is None:
        if not sp.issparse(p.a) and n <= 1000:
            lambda_min = float(np.linalg.eigvalsh(p.a)[0]) if n else 0.0
        else:
            lambda_min = estimate_lambda_min(p.a)
    curvature = lambda_min + p.sigma

    def value(x):
        B = x.reshape(n, r)
        return float(np.sum((As @ B) * B))

    def grad(x):
        return (2.0 * (As @ x.reshape(n, r))).reshape(-1)

    return Objective(value, grad, max(0.0, curvature), 2.0 * gershgorin_bound(As), n * r, curvature)


def product_oracle(p: MaxcutProblem) -> ProductOfSpheresOracle:
    return ProductOfSpheresOracle(p.n, p.r)


def gfw_maxcut_step(p: MaxcutProblem, B) -> np.ndarray:
    """One GFW step: rows of ``(A + sigma I) B`` normalized (zero rows keep ``B``)."""
    B = _check_factor(p, B)
    return normalize_rows(p.shifted @ B, B)


def run_gfw_maxcut(p: MaxcutProblem, B0, cfg: GfwConfig = GfwConfig()) -> RunResult:
    """GFW on the shifted model with one matrix product per iteration.

    The trace records ``<A, BB'>`` (the constant ``sigma*n`` removed), the
    Frobenius step and the FW gap ``2<G, B_{k+1} - B_k>`` taken from the same
    product ``G`` that drives the step.
    """
    B = np.array(_check_factor(p, B0), dtype=float, copy=True)
    if not is_feasible_factor(B, FEAS_TOL):
        raise InfeasibleStart("rows of B0 must have unit norm")
    As = p.shifted
    offset = p.sigma * p.n
    trace = GfwTrace(gradients=[] if cfg.record_gradients else None)
    t0 = time.perf_counter()
    G = As @ B
    status = None
    k = 0
    while status is None:
        nxt = normalize_rows(G, B)
        d = (nxt - B).reshape(-1)
        # flattened dot products, so the numbers match the generic engine bit for bit
        gap = _clamp_gap(2.0 * float(G.reshape(-1) @ d))
        step = math.sqrt(float(d @ d))
        elapsed = time.perf_counter() - t0
        trace.record(float(np.sum(G * B)) - offset, gap, step, elapsed,
                     (2.0 * G).reshape(-1) if cfg.record_gradients else None)
        status = _stop_reason(np.array_equal(nxt, B), gap, step, elapsed, k, cfg)
        B = nxt
        G = As @ B
        k += 1
    trace.finish(float(np.sum(G * B)) - offset, status, (2.0 * G).reshape(-1) if cfg.record_gradients else None)
    return RunResult(B, trace)


def run_bcm(p: MaxcutProblem, B0, cfg: GfwConfig = GfwConfig(), backend: Optional[str] = None) -> RunResult:
    """Block-coordinate maximization: sequential exact row updates.

    The diagonal of ``A`` (and hence ``sigma``) never enters an update. Rows
    with a block gradient below 1e-14 are kept. The trace has no FW gap
    (NaN entries); ``step_norm`` is the Frobenius norm of each sweep's change.
    """
    B = np.array(_check_factor(p, B0), dtype=float, copy=True, order="C")
    if not is_feasible_factor(B, FEAS_TOL):
        raise InfeasibleStart("rows of B0 must have unit norm")
    impl = kernels.get_backend(backend)
    A = p.a
    if sp.issparse(A):
        data = np.ascontiguousarray(A.data, dtype=float)
        indices = np.ascontiguousarray(A.indices, dtype=np.int32)
        indptr = np.ascontiguousarray(A.indptr, dtype=np.int32)

        def sweep(B):
            return impl.bcm_sweep_csr(data, indices, indptr, B, ZERO_GRAD)
    else:
        Ad = np.ascontiguousarray(A)

        def sweep(B):
            return impl.bcm_sweep_dense(Ad, B, ZERO_GRAD)

    trace = GfwTrace()
    t0 = time.perf_counter()
    status = None
    k = 0
    while status is None:
        obj = float(np.sum((A @ B) * B))
        step = float(sweep(B))
        elapsed = time.perf_counter() - t0
        trace.record(obj, math.nan, step, elapsed)
        status = _stop_reason(False, math.nan, step, elapsed, k, cfg)
        k += 1
    trace.finish(float(np.sum((A @ B) * B)), status)
    return RunResult(B, trace)


def choose_sigma(a, gamma: float, seed: int = 0) -> float:
    """``max(0, -lambda_min(A)) + gamma`` with lambda_min from power iteration."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    check_symmetric(a, tol=1e-10)
    return max(0.0, -estimate_lambda_min(a, seed=seed)) + gamma


def gen_gaussian_sym(n: int, seed: int) -> np.ndarray:
    """``(G + G')/n`` with i.i.d. standard normal ``G``; exactly symmetric."""
    if n < 1:
        raise ValueError("n must be >= 1")
    G = np.random.default_rng(seed).standard_normal((n, n))
    return (G + G.T) / n


def random_factor(n: int, r: int, seed) -> np.ndarray:
    """Rows drawn as normalized Gaussians (uniform on the product of spheres)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while True:
        B = rng.standard_normal((n, r))
        norms = np.sqrt(np.einsum("ij,ij->i", B, B))
        if np.all(norms > 0):
            return B / norms[:, None]


def strict_stationarity_holds(p: MaxcutProblem, B, tol: float = 1e-10) -> bool:
    """Each row is the unique maximizer over its sphere: ``|G_i| > tol`` and
    ``b_i == G_i/|G_i|`` exactly, with ``G = (A + sigma I) B``."""
    B = _check_factor(p, B)
    G = p.shifted @ B
    norms = np.sqrt(np.einsum("ij,ij->i", G, G))
    if np.any(norms <= tol):
        return False
    return bool(np.array_equal(normalize_rows(G, B), B))
