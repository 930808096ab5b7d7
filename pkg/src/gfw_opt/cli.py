"""Command-line front end: ``gfw-opt {rwl1,spca,maxcut} --seed N --out DIR ...``.

Every output file is a deterministic function of the flags. Wall-clock
columns stay empty unless ``--timing`` is given, so repeated invocations
produce identical bytes.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .core import GfwConfig
from .errors import GfwError
from .maxcut import (
    MaxcutProblem,
    as_storage,
    choose_sigma,
    default_rank,
    gen_gaussian_sym,
    random_factor,
    run_bcm,
    run_gfw_maxcut,
)
from .mmio import load_matrix_market
from .parallel import JOBS_ENV, default_jobs, map_ordered
from .rwl1 import recovery_experiment, records_to_csv, summarize
from .spca import (
    BRUTE_FORCE_MAX_N,
    SpcaProblem,
    brute_force_spca,
    random_feasible_start,
    run_spca,
    runs_to_csv,
    support_of,
)
from .svg import render_svg

FORMATS = ("csv", "json", "svg")
MONOTONE_TOL = 1e-8


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers


def parse_grid(text: str) -> list:
    """``"4,8"`` or ``"20..60:10"`` (inclusive, step defaults to 1) or a mix."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise UsageError(f"empty item in grid {text!r}")
        try:
            if ".." in part:
                span, _, step = part.partition(":")
                lo, hi = (int(v) for v in span.split(".."))
                step = int(step) if step else 1
                if step < 1 or hi < lo:
                    raise ValueError
                out.extend(range(lo, hi + 1, step))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"bad grid item {part!r}; use a,b,c or a..b:step") from None
    return out


def parse_floats(text: str) -> list:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad number list {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise UsageError(f"non-finite value in {text!r}")
    return vals


def parse_sigma(text: str):
    """``fixed:v`` or ``auto:gamma`` -> ``(mode, value)``."""
    mode, _, val = text.partition(":")
    if mode not in ("fixed", "auto") or not val:
        raise UsageError(f"bad sigma {text!r}; use fixed:v or auto:gamma")
    try:
        v = float(val)
    except ValueError:
        raise UsageError(f"bad sigma value {val!r}") from None
    if mode == "fixed" and v < 0 or mode == "auto" and v <= 0 or not math.isfinite(v):
        raise UsageError(f"sigma value out of range in {text!r}")
    return mode, v


def parse_formats(text: str) -> tuple:
    fmts = tuple(f.strip() for f in text.split(",") if f.strip())
    bad = [f for f in fmts if f not in FORMATS]
    if bad or not fmts:
        raise UsageError(f"unknown format(s) {bad or text!r}; choose from {','.join(FORMATS)}")
    return fmts


def _positive(name, v, allow_zero=False):
    if v < 0 or (v == 0 and not allow_zero):
        raise UsageError(f"--{name} must be {'nonnegative' if allow_zero else 'positive'}")


def _write(out_dir: str, name: str, text: str) -> None:
    with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _fmt_time(t: float, timing: bool) -> str:
    return repr(float(t)) if timing else ""


# ---------------------------------------------------------------- rwl1


def cmd_rwl1(args) -> int:
    grid = parse_grid(args.s)
    for name in ("n", "m", "trials"):
        _positive(name, getattr(args, name))
    _positive("eps", args.eps)
    _positive("tol", args.tol, allow_zero=True)
    if args.m > args.n or any(s < 0 or s > args.n for s in grid):
        raise UsageError("need m <= n and 0 <= s <= n")
    records = recovery_experiment(args.n, args.m, grid, args.trials, args.eps, args.tol, args.seed,
                                  jobs=args.jobs, max_iter=args.max_iter)
    stats = summarize(records)
    if "csv" in args.formats:
        _write(args.out, "rwl1_recovery.csv", records_to_csv(records, args.timing))
    if "json" in args.formats:
        doc = {
            "config": {"n": args.n, "m": args.m, "s": grid, "trials": args.trials, "eps": args.eps,
                       "tol": args.tol, "seed": args.seed},
            "summary": [
                {"variant": st.variant, "s": st.s, "trials": st.trials, "successes": st.successes,
                 "rate": st.rate, "mean_iters": st.mean_iters,
                 "mean_time": st.mean_time if args.timing else None}
                for st in stats
            ],
        }
        _write(args.out, "rwl1_recovery.json", json.dumps(doc, indent=1, sort_keys=True) + "\n")
    if "svg" in args.formats:
        series = {}
        for st in stats:
            series.setdefault(st.variant, []).append((st.s, st.rate))
        if len(grid) < 2:
            raise UsageError("svg output needs at least two sparsity levels")
        _write(args.out, "rwl1_recovery.svg",
               render_svg(series, "sparsity s", "recovery rate", "sparse recovery"))
    return 0


# ---------------------------------------------------------------- spca


def _load_input(path: str):
    try:
        return load_matrix_market(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _spca_task(task):
    p, x0, cfg = task
    return run_spca(p, x0, cfg)


def cmd_spca(args) -> int:
    _positive("restarts", args.restarts)
    if args.input:
        a = _load_input(args.input)
        a = a.toarray() if hasattr(a, "toarray") else a
    else:
        _positive("n", args.n)
        G = np.random.default_rng(args.seed).standard_normal((args.n, args.n))
        a = (G + G.T) / 2.0
    n = a.shape[0]
    if not 1 <= args.k <= n:
        raise UsageError(f"--k must be in 1..{n}")
    if args.oracle_check and n > BRUTE_FORCE_MAX_N:
        raise UsageError(f"--oracle-check needs n <= {BRUTE_FORCE_MAX_N}")
    mode, v = parse_sigma(args.sigma)
    sigma = v if mode == "fixed" else choose_sigma(a, v, seed=args.seed) if n else v
    p = SpcaProblem(a, args.k, sigma)
    cfg = GfwConfig(max_iter=args.max_iter, tol_step=args.tol)
    rng = np.random.default_rng([args.seed, 1])
    starts = [random_feasible_start(n, args.k, rng) for _ in range(args.restarts)]
    runs = map_ordered(_spca_task, [(p, x0, cfg) for x0 in starts], args.jobs)
    best = max(range(len(runs)), key=lambda i: (runs[i].final_objective, -i))
    global_value = brute_force_spca(a, args.k)[1] if args.oracle_check else None
    if "csv" in args.formats:
        _write(args.out, "spca_runs.csv", runs_to_csv(runs, global_value))
    if "json" in args.formats:
        doc = {
            "n": n, "k": args.k, "sigma": sigma, "seed": args.seed, "best_restart": best,
            "best_objective": runs[best].final_objective,
            "best_support": support_of(runs[best].final_iterate),
            "global_optimum": global_value,
            "best_trace": runs[best].trace.to_dict(args.timing),
        }
        _write(args.out, "spca_runs.json", json.dumps(doc, indent=1, sort_keys=True) + "\n")
    if "svg" in args.formats:
        obj = runs[best].trace.objective
        pts = list(enumerate(obj)) if len(obj) > 1 else [(0, obj[0]), (1, obj[0])]
        _write(args.out, "spca_runs.svg", render_svg({"best restart": pts}, "iteration", "x'Ax", "sparse PCA"))
    return 0


# ---------------------------------------------------------------- maxcut


def _summary_row(label, sigma, res):
    obj = np.asarray(res.trace.objective)
    monotone = bool(np.all(np.diff(obj) >= -MONOTONE_TOL))
    converged = res.status.value in ("StepConverged", "GapConverged", "IterateRepeated")
    return {"algo": label, "sigma": sigma, "iters": res.trace.n_iter, "final_objective": float(obj[-1]),
            "status": res.status.value, "monotone": monotone, "converged": converged}


def cmd_maxcut(args) -> int:
    if args.input:
        a = as_storage(_load_input(args.input))
        default_sigma = "auto:0.1"
    else:
        if args.n is None:
            raise UsageError("give --n or --input")
        _positive("n", args.n)
        a = gen_gaussian_sym(args.n, args.seed)
        default_sigma = f"fixed:{50.0 / args.n!r}"
    n = a.shape[0]
    if n == 0:
        raise UsageError("empty matrix")
    r = args.r if args.r is not None else default_rank(n)
    _positive("r", r)
    _positive("budget", args.budget)
    _positive("tol", args.tol, allow_zero=True)
    algos = [x.strip() for x in args.algos.split(",") if x.strip()]
    if not algos or any(x not in ("gfw", "bcm") for x in algos):
        raise UsageError("--algos must be a subset of gfw,bcm")
    cfg = GfwConfig(max_iter=args.max_iter, tol_step=args.tol, wall_time_limit=args.budget)
    B0 = random_factor(n, r, np.random.default_rng([args.seed, 1]))

    runs = []
    if args.sigma_sweep:
        for sigma in parse_floats(args.sigma_sweep):
            if sigma < 0:
                raise UsageError("sigma values must be nonnegative")
            p = MaxcutProblem(a, r, sigma)
            runs.append((f"gfw[sigma={sigma!r}]", sigma, run_gfw_maxcut(p, B0, cfg)))
    else:
        mode, v = parse_sigma(args.sigma or default_sigma)
        sigma = v if mode == "fixed" else choose_sigma(a, v, seed=args.seed)
        p = MaxcutProblem(a, r, sigma)
        for algo in algos:
            res = run_gfw_maxcut(p, B0, cfg) if algo == "gfw" else run_bcm(p, B0, cfg)
            runs.append((algo, sigma, res))

    summary = [_summary_row(label, sigma, res) for label, sigma, res in runs]
    if "csv" in args.formats:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["algo", "iter_or_sweep", "objective", "time_s"])
        for label, _, res in runs:
            tr = res.trace
            times = list(tr.time_s) + [tr.time_s[-1] if tr.time_s else 0.0]
            for k, obj in enumerate(tr.objective):
                w.writerow([label, k, repr(obj), _fmt_time(times[k], args.timing)])
        _write(args.out, "maxcut_trace.csv", buf.getvalue())
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(summary[0]), lineterminator="\n")
        w.writeheader()
        for row in summary:
            w.writerow({**row, "sigma": repr(row["sigma"]), "final_objective": repr(row["final_objective"]),
                        "monotone": int(row["monotone"]), "converged": int(row["converged"])})
        _write(args.out, "maxcut_summary.csv", buf.getvalue())
    if "json" in args.formats:
        doc = {"n": n, "r": r, "seed": args.seed, "summary": summary,
               "traces": {label: res.trace.to_dict(args.timing) for label, _, res in runs}}
        _write(args.out, "maxcut.json", json.dumps(doc, indent=1, sort_keys=True) + "\n")
    if "svg" in args.formats:
        series = {}
        for label, _, res in runs:
            tr = res.trace
            if args.timing:
                xs = [0.0] + list(tr.time_s)
            else:
                xs = list(range(len(tr.objective)))
            pts = list(zip(xs, tr.objective))
            series[label] = pts if len(pts) > 1 else pts * 2
        xl = "wall time (s)" if args.timing else "iteration / sweep"
        _write(args.out, "maxcut_trace.svg", render_svg(series, xl, "<A, BB'>", "low-rank Max-Cut"))
    return 0


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, required=True, help="master seed (mandatory)")
    common.add_argument("--out", default=".", help="output directory (created if missing)")
    common.add_argument("--formats", default="csv", help="comma list from csv,json,svg")
    common.add_argument("--jobs", type=int, default=None, help=f"worker processes (default ${JOBS_ENV} or 1)")
    common.add_argument("--timing", action="store_true", help="fill wall-clock columns (breaks byte determinism)")
    common.add_argument("--max-iter", type=int, default=1000)

    parser = argparse.ArgumentParser(prog="gfw-opt", description="Greedy Frank-Wolfe experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rwl1", parents=[common], help="reweighted l1 sparse recovery")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--s", default="20..60:10", help="sparsity grid, e.g. 4,8 or 20..60:10")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--tol", type=float, default=1e-3)
    p.set_defaults(func=cmd_rwl1)

    p = sub.add_parser("spca", parents=[common], help="sparse PCA multistart")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--input", help="Matrix Market file with the covariance matrix")
    p.add_argument("--sigma", default="auto:0.1", help="fixed:v or auto:gamma")
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--oracle-check", action="store_true", help="compare with brute force (n <= 12)")
    p.set_defaults(func=cmd_spca)

    p = sub.add_parser("maxcut", parents=[common], help="low-rank Max-Cut, GFW vs BCM")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--input", help="Matrix Market graph file")
    p.add_argument("--r", type=int, default=None, help="rank (default ceil(sqrt(2n)))")
    p.add_argument("--sigma", default=None, help="fixed:v or auto:gamma (default fixed:50/n, auto:0.1 for --input)")
    p.add_argument("--sigma-sweep", default=None, help="comma list of sigma values, one GFW run each")
    p.add_argument("--algos", default="gfw,bcm")
    p.add_argument("--budget", type=float, default=10.0, help="wall-time limit per run in seconds")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_maxcut, max_iter=10000)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.formats = parse_formats(args.formats)
        if args.seed < 0 or args.seed >= 2**32:
            raise UsageError("--seed must be in [0, 2^32)")
        if args.jobs is None:
            try:
                args.jobs = default_jobs()
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        _positive("jobs", args.jobs)
        _positive("max-iter", args.max_iter)
        os.makedirs(args.out, exist_ok=True)
        return args.func(args)
    except UsageError as exc:
        print(f"gfw-opt {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (GfwError, OSError, ValueError) as exc:
        print(f"gfw-opt {args.command}: failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
