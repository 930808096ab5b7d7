import numpy as np
import pytest

from gfw_opt.core import GfwConfig, Status
from gfw_opt.engine import increase_margins, monotonicity_margins
from gfw_opt.errors import OracleFailure
from gfw_opt.rwl1 import (
    RwVariant,
    SparseInstance,
    gen_sparse_instance,
    l1_start,
    records_to_csv,
    recovery_experiment,
    relative_error,
    run_l1,
    run_rwl1,
    rw_weights,
    split_alpha,
    summarize,
)

SPLIT = RwVariant("rwl1_split", 0.1)
COUPLED = RwVariant("rwl1", 0.1)


class TestInstance:
    def test_tiny(self):
        inst = gen_sparse_instance(4, 2, 1, 7)
        assert np.count_nonzero(inst.x_true) == 1
        np.testing.assert_allclose(np.linalg.norm(inst.a, axis=0), 1.0, atol=1e-12)
        assert np.max(np.abs(inst.a @ inst.x_true - inst.b)) <= 1e-12

    def test_deterministic(self):
        a, b = gen_sparse_instance(30, 10, 4, 3), gen_sparse_instance(30, 10, 4, 3)
        assert np.array_equal(a.a, b.a) and np.array_equal(a.x_true, b.x_true) and np.array_equal(a.b, b.b)

    def test_full_row_rank_at_n256(self):
        inst = gen_sparse_instance(256, 100, 20, 1)
        assert np.linalg.norm(inst.b) > 0
        assert np.linalg.matrix_rank(inst.a) == 100

    def test_json_roundtrip(self):
        inst = gen_sparse_instance(6, 3, 2, 0)
        back = SparseInstance.from_json(inst.to_json())
        assert np.array_equal(back.a, inst.a) and np.array_equal(back.x_true, inst.x_true)
        assert back.s == 2 and back.seed == 0

    def test_invalid(self):
        with pytest.raises(ValueError):
            gen_sparse_instance(4, 5, 1, 0)


class TestWeights:
    def test_split(self):
        w = rw_weights(SPLIT, [0.5, 0.0], [0.0, 0.0])
        np.testing.assert_allclose(w, [1 / 0.6, 10.0, 10.0, 10.0])

    def test_coupled(self):
        w = rw_weights(COUPLED, [0.5, 0.0], [0.0, 0.0])
        np.testing.assert_allclose(w, [1 / 0.6, 10.0, 1 / 0.6, 10.0])

    def test_zero_point(self):
        for v in (SPLIT, COUPLED):
            np.testing.assert_allclose(rw_weights(v, np.zeros(3), np.zeros(3)), 10.0)

    def test_invalid_epsilon(self):
        with pytest.raises(ValueError):
            RwVariant("rwl1", 0.0)


class TestRun:
    def test_zero_signal(self):
        inst = gen_sparse_instance(10, 5, 0, 0)
        res = run_rwl1(inst, SPLIT)
        np.testing.assert_array_equal(res.x_hat, np.zeros(10))
        assert res.status is Status.ITERATE_REPEATED and res.iterations == 1

    def test_tiny_exact_recovery(self):
        inst = gen_sparse_instance(4, 3, 1, 0)
        for v in (SPLIT, COUPLED):
            res = run_rwl1(inst, v)
            assert relative_error(res.x_hat, inst.x_true) <= 1e-6
            assert res.iterations <= 5

    @pytest.mark.parametrize("seed", range(5))
    def test_split_finite_termination(self, seed):
        inst = gen_sparse_instance(40, 15, 3, seed)
        res = run_rwl1(inst, SPLIT, GfwConfig(max_iter=200))
        assert res.status is Status.ITERATE_REPEATED

    @pytest.mark.parametrize("seed", range(3))
    def test_theory_on_traces(self, seed):
        inst = gen_sparse_instance(30, 12, 5, seed)
        for v in (SPLIT, COUPLED):
            res = run_rwl1(inst, v, GfwConfig(max_iter=100, record_gradients=True))
            assert np.all(monotonicity_margins(res.trace) >= -1e-10)
            alpha = split_alpha(v.epsilon, res.max_coord) if v is SPLIT else 0.0
            assert np.all(increase_margins(res.trace, alpha) >= -1e-8)

    def test_same_start_and_first_step(self):
        # both variants start from the plain l1 vertex; their first weights
        # differ, so only the start is shared bit for bit
        inst = gen_sparse_instance(30, 12, 4, 9)
        z0 = l1_start(inst)
        np.testing.assert_array_equal(run_l1(inst).x_hat, z0[:30] - z0[30:])
        a = run_rwl1(inst, SPLIT, GfwConfig(max_iter=1))
        b = run_rwl1(inst, COUPLED, GfwConfig(max_iter=1))
        assert a.trace.objective[0] == pytest.approx(-np.sum(np.log(0.1 + z0)))
        assert b.trace.objective[0] == pytest.approx(-np.sum(np.log(0.1 + z0[:30] + z0[30:])))

    def test_vertices_have_complementary_supports(self):
        inst = gen_sparse_instance(30, 12, 4, 2)
        z = run_rwl1(inst, SPLIT).result.final_iterate
        assert np.max(z[:30] * z[30:]) == 0.0

    def test_inconsistent_instance(self):
        inst = gen_sparse_instance(4, 2, 1, 0)
        bad = SparseInstance(np.zeros((2, 4)), inst.x_true, np.array([1.0, 0.0]), 1, 0)
        with pytest.raises(OracleFailure):
            run_rwl1(bad, SPLIT)


class TestExperiment:
    def test_rows_and_determinism(self):
        recs = recovery_experiment(20, 10, [2, 4], 2, seed=1)
        assert len(recs) == 3 * 2 * 2
        assert [r.variant for r in recs[:4]] == ["l1"] * 4
        again = recovery_experiment(20, 10, [2, 4], 2, seed=1)
        assert records_to_csv(recs) == records_to_csv(again)

    def test_csv_header(self):
        text = records_to_csv(recovery_experiment(12, 6, [1], 1, seed=0))
        lines = text.strip().split("\n")
        assert lines[0] == "variant,s,trial,seed,recovered,cg_iters,time_s,rel_err"
        assert len({len(line.split(",")) for line in lines}) == 1

    def test_far_beyond_threshold(self):
        recs = recovery_experiment(30, 10, [10], 4, seed=2)
        for st in summarize(recs):
            assert st.successes <= st.trials
            assert st.rate <= 0.25

    def test_parallel_matches_serial(self):
        a = recovery_experiment(16, 8, [2], 2, seed=4, jobs=1)
        b = recovery_experiment(16, 8, [2], 2, seed=4, jobs=2)
        assert [(r.variant, r.s, r.trial, r.rel_err) for r in a] == [(r.variant, r.s, r.trial, r.rel_err) for r in b]
