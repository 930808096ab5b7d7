"""Order-preserving process-pool map used by the experiment harnesses."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional, Sequence

JOBS_ENV = "GFW_OPT_JOBS"


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        jobs = int(raw)
    except ValueError:
        raise ValueError(f"{JOBS_ENV} must be an integer, got {raw!r}") from None
    if jobs < 1:
        raise ValueError(f"{JOBS_ENV} must be >= 1")
    return jobs


def map_ordered(fn: Callable, tasks: Sequence, jobs: Optional[int] = None) -> list:
    """``[fn(t) for t in tasks]``, optionally spread over ``jobs`` worker processes.

    Results come back in task order regardless of completion order, so the
    output does not depend on the number of workers.
    """
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))
