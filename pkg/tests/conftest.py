import numpy as np

from gfw_opt.lp import LpStandardForm


def random_bounded_lp(rng, m, n, degenerate=False):
    """Feasible standard-form LP whose first row has positive coefficients (bounded)."""
    a = rng.standard_normal((m, n))
    a[0] = rng.uniform(0.5, 2.0, size=n)
    x = rng.uniform(0.0, 1.0, size=n)
    if degenerate:
        x[rng.choice(n, size=max(1, n - m), replace=False)] = 0.0
    return LpStandardForm(a, a @ x, rng.standard_normal(n))


def square_lp(c=(0.0, 0.0, 0.0, 0.0)):
    """[0,1]^2 as x1 + s1 = 1, x2 + s2 = 1 with variables (x1, x2, s1, s2)."""
    return LpStandardForm([[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0]], [1.0, 1.0], list(c))


def stalling_square_lp():
    """[0,1]^2 with columns ordered (x1, s2, x2, s1); coordinates are columns 0 and 2.

    With this order Bland's rule answers the gradient (2, 0) at (1, 0) with the
    vertex (1, 0) itself although (1, 1) is an equally good LP solution.
    """
    return LpStandardForm([[1.0, 0.0, 0.0, 1.0], [0.0, 1.0, 1.0, 0.0]], [1.0, 1.0], [0.0] * 4)


_ACCEPTANCE_LINES = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    _ACCEPTANCE_LINES.append((number, line))


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
