import numpy as np
import pytest

from gfw_opt.core import GfwConfig, Status
from gfw_opt.engine import monotonicity_margins
from gfw_opt.errors import InfeasibleStart, TooLarge
from gfw_opt.spca import (
    SpcaProblem,
    brute_force_spca,
    is_fixed_point,
    random_feasible_start,
    run_spca,
    runs_to_csv,
    spca_multistart,
    support_of,
)

D321 = np.diag([3.0, 2.0, 1.0])


class TestRun:
    def test_global_fixed_point(self):
        res = run_spca(SpcaProblem(D321, 1, 0.1), [1.0, 0.0, 0.0])
        np.testing.assert_array_equal(res.final_iterate, [1.0, 0.0, 0.0])
        assert res.final_objective == 3.0

    def test_nonglobal_fixed_point(self):
        p = SpcaProblem(D321, 1, 0.1)
        res = run_spca(p, [0.0, 0.0, 1.0])
        np.testing.assert_array_equal(res.final_iterate, [0.0, 0.0, 1.0])
        assert res.final_objective == 1.0
        assert res.status is Status.ITERATE_REPEATED
        assert is_fixed_point(p, res.final_iterate, 1e-9)

    def test_full_cardinality_is_power_iteration(self):
        G = np.random.default_rng(5).standard_normal((5, 5))
        A = (G + G.T) / 2
        w, V = np.linalg.eigh(A)
        p = SpcaProblem(A, 5)
        res = run_spca(p, np.ones(5) / np.sqrt(5), GfwConfig(max_iter=100_000, tol_step=1e-13))
        top = V[:, np.argmax(w + p.sigma)]
        x = res.final_iterate
        assert min(np.linalg.norm(x - top), np.linalg.norm(x + top)) <= 1e-6

    def test_infeasible_start(self):
        with pytest.raises(InfeasibleStart):
            run_spca(SpcaProblem(D321, 1, 0.1), [0.6, 0.8, 0.0])

    def test_default_sigma(self):
        A = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert SpcaProblem(A, 1).sigma == pytest.approx(1.1, abs=1e-9)

    def test_iterates_monotone_and_feasible(self):
        rng = np.random.default_rng(3)
        G = rng.standard_normal((9, 9))
        p = SpcaProblem((G + G.T) / 2, 4)
        res = run_spca(p, random_feasible_start(9, 4, rng), GfwConfig(max_iter=500, tol_step=1e-12))
        assert np.all(monotonicity_margins(res.trace) >= -1e-10)
        assert p.oracle().contains(res.final_iterate)


class TestBruteForce:
    def test_diag(self):
        x, v = brute_force_spca(D321, 2)
        assert v == 3.0
        assert support_of(x) == [0]
        np.testing.assert_array_equal(np.abs(x), [1.0, 0.0, 0.0])

    def test_full_support(self):
        G = np.random.default_rng(1).standard_normal((6, 6))
        A = (G + G.T) / 2
        assert brute_force_spca(A, 6)[1] == pytest.approx(np.linalg.eigvalsh(A)[-1], abs=1e-12)

    def test_ones(self):
        assert brute_force_spca(np.ones((3, 3)), 2)[1] == pytest.approx(2.0, abs=1e-12)

    def test_limits(self):
        with pytest.raises(TooLarge):
            brute_force_spca(np.eye(13), 1)
        assert brute_force_spca(np.eye(12), 6)[1] == 1.0


class TestMultistart:
    def test_single_restart(self):
        p = SpcaProblem(D321, 2, 0.1)
        ms = spca_multistart(p, 1, seed=4)
        direct = run_spca(p, ms.starts[0])
        np.testing.assert_array_equal(ms.best.final_iterate, direct.final_iterate)

    def test_diag_finds_global(self):
        ms = spca_multistart(SpcaProblem(D321, 1, 0.1), 10, seed=0)
        assert ms.best.final_objective == 3.0

    def test_deterministic(self):
        rng = np.random.default_rng(2)
        G = rng.standard_normal((8, 8))
        p = SpcaProblem((G + G.T) / 2, 3)
        a = spca_multistart(p, 5, GfwConfig(tol_step=1e-12), seed=7)
        b = spca_multistart(p, 5, GfwConfig(tol_step=1e-12), seed=7)
        assert runs_to_csv(a.runs) == runs_to_csv(b.runs)

    def test_csv(self):
        ms = spca_multistart(SpcaProblem(D321, 2, 0.1), 3, seed=1)
        lines = runs_to_csv(ms.runs, 3.0).strip().split("\n")
        assert lines[0] == "restart,final_obj,iters,status,support,gap"
        assert len(lines) == 4

    def test_invalid(self):
        with pytest.raises(ValueError):
            spca_multistart(SpcaProblem(D321, 1, 0.1), 0)
