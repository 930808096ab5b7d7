import itertools
import json

import numpy as np
import pytest
from conftest import random_bounded_lp, square_lp

from gfw_opt.errors import TooLarge
from gfw_opt.lp import (
    LpStandardForm,
    LpStatus,
    alternative_optima,
    alternative_vertex,
    enumerate_vertices,
    solve_lp,
)


def edge_lp():
    return LpStandardForm([[1.0, 1.0, 1.0]], [1.0], [-1.0, -1.0, 0.0])


class TestSolve:
    def test_edge_optimum(self):
        sol = solve_lp(edge_lp())
        assert sol.status is LpStatus.OPTIMAL
        assert sol.objective == pytest.approx(-1.0)
        np.testing.assert_allclose(sol.x, [1.0, 0.0, 0.0])
        assert sol.has_alternative_optima

    def test_minimize_nonnegative(self):
        sol = solve_lp(LpStandardForm([[1.0, 1.0]], [1.0], [1.0, 0.0]))
        np.testing.assert_allclose(sol.x, [0.0, 1.0])
        assert sol.objective == 0.0

    def test_infeasible(self):
        sol = solve_lp(LpStandardForm([[1.0]], [-1.0], [0.0]))
        assert sol.status is LpStatus.INFEASIBLE

    def test_unbounded(self):
        sol = solve_lp(LpStandardForm([[1.0, -1.0]], [0.0], [-1.0, 0.0]))
        assert sol.status is LpStatus.UNBOUNDED

    def test_redundant_rows(self):
        sol = solve_lp(LpStandardForm([[1.0, 1.0, 1.0], [2.0, 2.0, 2.0]], [1.0, 2.0], [0.0, -1.0, 0.0]))
        assert sol.status is LpStatus.OPTIMAL
        np.testing.assert_allclose(sol.x, [0.0, 1.0, 0.0])

    def test_deterministic(self):
        p = random_bounded_lp(np.random.default_rng(5), 3, 7)
        a, b = solve_lp(p), solve_lp(p)
        assert np.array_equal(a.x, b.x) and a.basis == b.basis

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            LpStandardForm([[1.0, np.nan]], [1.0], [0.0, 0.0])
        with pytest.raises(ValueError):
            LpStandardForm(np.ones((3, 2)), np.ones(3), np.ones(2))

    @pytest.mark.parametrize("seed", range(25))
    def test_certificates(self, seed):
        rng = np.random.default_rng(seed)
        p = random_bounded_lp(rng, int(rng.integers(1, 5)), int(rng.integers(5, 10)), degenerate=seed % 3 == 0)
        sol = solve_lp(p)
        assert sol.status is LpStatus.OPTIMAL
        assert np.max(np.abs(p.a @ sol.x - p.b)) <= 1e-8 * (1 + np.max(np.abs(p.b)))
        assert np.all(sol.x >= -1e-9)
        assert np.all(sol.reduced_costs[list(sol.basis)] == 0.0)
        assert np.all(sol.reduced_costs >= -1e-9)
        # duality: c'x = b'y on the rows kept by Phase I
        assert sol.objective == pytest.approx(float(p.b[list(sol.rows)] @ sol.dual), abs=1e-7)


class TestAlternatives:
    def test_edge_alternative(self):
        p = edge_lp()
        x = alternative_vertex(p, solve_lp(p))
        np.testing.assert_allclose(x, [0.0, 1.0, 0.0])

    def test_unique_optimum(self):
        p = LpStandardForm([[1.0, 1.0, 1.0]], [1.0], [-2.0, -1.0, 0.0])
        assert alternative_vertex(p, solve_lp(p)) is None

    def test_degenerate_same_point(self):
        # the optimal vertex (1, 0, 0, 0) is degenerate; the zero reduced cost
        # pivot stays at the same geometric point
        p = LpStandardForm([[1.0, 1.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0]], [1.0, 0.0], [-1.0, -1.0, 0.0, 0.0])
        sol = solve_lp(p)
        assert sol.has_alternative_optima
        assert alternative_vertex(p, sol) is None

    @pytest.mark.parametrize("seed", range(15))
    def test_alternatives_are_optimal_vertices(self, seed):
        rng = np.random.default_rng(100 + seed)
        m, n = 2, 6
        a = rng.integers(1, 3, size=(m, n)).astype(float)
        p = LpStandardForm(a, a @ np.ones(n), rng.integers(-2, 2, size=n).astype(float))
        sol = solve_lp(p)
        verts = enumerate_vertices(p)
        for alt in alternative_optima(p, sol):
            assert alt.objective == pytest.approx(sol.objective, abs=1e-9)
            assert any(np.max(np.abs(alt.x - v)) <= 1e-8 for v in verts)


class TestEnumerate:
    def test_unit_simplex(self):
        verts = enumerate_vertices(LpStandardForm([[1.0, 1.0, 1.0]], [1.0], [0.0, 0.0, 0.0]))
        got = sorted(tuple(v) for v in verts)
        assert got == sorted(tuple(e) for e in np.eye(3))

    def test_square(self):
        verts = enumerate_vertices(square_lp())
        assert sorted(tuple(v[:2]) for v in verts) == [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]

    def test_seeded_instance(self):
        # independently checked: 3 constraints, 6 variables, vertices found by
        # solving every 3x3 basis with numpy and keeping nonnegative solutions
        p = random_bounded_lp(np.random.default_rng(42), 3, 6)
        expected = []
        for cols in itertools.combinations(range(6), 3):
            B = p.a[:, cols]
            if abs(np.linalg.det(B)) < 1e-10:
                continue
            xb = np.linalg.solve(B, p.b)
            if np.all(xb >= -1e-9):
                x = np.zeros(6)
                x[list(cols)] = xb
                if not any(np.max(np.abs(x - e)) <= 1e-9 for e in expected):
                    expected.append(x)
        verts = enumerate_vertices(p)
        assert len(verts) == len(expected)
        for v in verts:
            assert any(np.max(np.abs(v - e)) <= 1e-8 for e in expected)

    def test_guard(self):
        with pytest.raises(TooLarge):
            enumerate_vertices(LpStandardForm(np.ones((1, 17)), [1.0], np.zeros(17)))


def test_json_roundtrip():
    p = random_bounded_lp(np.random.default_rng(1), 2, 4)
    doc = json.loads(p.to_json())
    assert set(doc) == {"m", "n", "A", "b", "c"}
    assert len(doc["A"]) == 8
    q = LpStandardForm.from_json(p.to_json())
    assert np.array_equal(q.a, p.a) and np.array_equal(q.b, p.b) and np.array_equal(q.c, p.c)


class TestLoopGuards:
    def test_repeated_basis_is_reported(self, monkeypatch):
        from gfw_opt import kernels
        from gfw_opt.errors import NumericalBreakdown

        # a kernel that always stops at the step limit without pivoting
        monkeypatch.setattr(kernels, "bland_run", lambda T, basis, *args: (2, 0))
        with pytest.raises(NumericalBreakdown, match="cycling"):
            solve_lp(random_bounded_lp(np.random.default_rng(0), 3, 6))

    def test_pivot_cap(self):
        from gfw_opt.errors import NumericalBreakdown
        from gfw_opt.lp import _bland_loop, phase_one

        p = random_bounded_lp(np.random.default_rng(7), 20, 80)
        start = phase_one(p.a, p.b)
        # this instance needs 89 Phase II pivots, more than one chunk
        assert _bland_loop(p.a, p.b, p.c, list(start.basis)).pivots > 60
        with pytest.raises(NumericalBreakdown, match="no termination"):
            _bland_loop(p.a, p.b, p.c, list(start.basis), max_pivots=10)
