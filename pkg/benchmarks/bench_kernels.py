"""Compare the compiled kernels with the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat 5] [--quick]

Each case is timed with both backends on identical inputs; the best of
``--repeat`` runs is reported together with the speedup and a check that
both backends produced the same result.
"""

import argparse
import contextlib
import time

import numpy as np
import scipy.sparse as sp

from gfw_opt import kernels, solve_lp
from gfw_opt.lp import LpStandardForm
from gfw_opt.maxcut import gen_gaussian_sym, random_factor


@contextlib.contextmanager
def use_backend(impl):
    """Route the simplex solver through ``impl`` for the duration of the block."""
    saved = kernels.pivot, kernels.bland_run
    kernels.pivot, kernels.bland_run = impl.pivot, impl.bland_run
    try:
        yield impl
    finally:
        kernels.pivot, kernels.bland_run = saved


def best_time(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def case_bcm_dense(n, r):
    A = gen_gaussian_sym(n, 0)
    B0 = random_factor(n, r, 1)

    def run(impl):
        B = B0.copy()
        impl.bcm_sweep_dense(A, B, 1e-14)
        return B

    return f"bcm sweep dense n={n} r={r}", run


def case_bcm_csr(n, r, density):
    A = sp.random(n, n, density=density, random_state=0, format="csr")
    A = (A + A.T).tocsr()
    data, idx, ptr = A.data, A.indices.astype(np.int32), A.indptr.astype(np.int32)
    B0 = random_factor(n, r, 1)

    def run(impl):
        B = B0.copy()
        impl.bcm_sweep_csr(data, idx, ptr, B, 1e-14)
        return B

    return f"bcm sweep csr n={n} r={r} density={density}", run


def case_lp(m, n):
    rng = np.random.default_rng(0)
    a = rng.standard_normal((m, n))
    a[0] = rng.uniform(0.5, 2.0, size=n)
    p = LpStandardForm(a, a @ rng.uniform(size=n), rng.standard_normal(n))

    def run(impl):
        with use_backend(impl):
            return solve_lp(p).x

    return f"simplex solve m={m} n={n}", run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="smaller instances")
    args = ap.parse_args(argv)
    try:
        cy = kernels.get_backend("cython")
    except ImportError:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
        return 1
    py = kernels.get_backend("python")
    scale = 4 if args.quick else 1
    cases = [
        case_bcm_dense(1000 // scale, 32),
        case_bcm_csr(5000 // scale, 32, 0.002),
        case_lp(40 // scale, 120 // scale),
    ]
    print(f"{'case':45s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}  same")
    for name, run in cases:
        tp, outp = best_time(lambda: run(py), args.repeat)
        tc, outc = best_time(lambda: run(cy), args.repeat)
        same = np.allclose(outp, outc, rtol=1e-10, atol=1e-12)
        print(f"{name:45s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}  {same}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
