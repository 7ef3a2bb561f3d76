import numpy as np
import pytest

import oracles
from qewtopsis import (
    GreyConfig,
    IndicatorMatrix,
    MethodFailure,
    ModelConfig,
    WeightVector,
    compare_methods,
    compare_results,
    delta_proportions,
    derive_indicators,
    forward_normalize,
    impact_rate,
    probability_matrix,
    rank,
    reference_comparison,
    robustness_sweep,
    run_ew_topsis,
    run_method,
    run_q_ew_topsis,
    shannon_entropy,
    solve_q_detailed,
)
from qewtopsis.topsis import ScoreTable
from conftest import random_matrix, random_supply


def dirs_of(m):
    return [d.value for d in m.directions]


def ranked(scores, ids):
    n = len(ids)
    return rank(ScoreTable(tuple(ids), np.zeros(n), np.zeros(n), np.asarray(scores, float), np.zeros(n, int)))


def six_by_four():
    values = [
        [3.2, 410.0, 20, 12.0],
        [0.8, 150.0, 9, -30.0],
        [5.5, 620.0, 23, 41.0],
        [1.9, 300.0, 15, 2.5],
        [7.1, 95.0, 4, -8.0],
        [2.4, 510.0, 18, 19.0],
    ]
    return IndicatorMatrix(list("ABCDEF"), values, ["min", "max", "max", "max"], ["EV", "S", "L", "T"])


class TestEwTopsis:
    def test_dominant_row_wins(self):
        m = IndicatorMatrix(["x", "y", "z"], [[1.0, 9.0], [5.0, 2.0], [3.0, 5.0]], ["min", "max"])
        t = run_ew_topsis(m).score_table
        assert t.scores[0] == 100.0 and t.scores[1] == 0.0
        assert t.rank.tolist() == [1, 3, 2]

    def test_identical_rows(self):
        m = IndicatorMatrix(["a", "b", "c"], np.ones((3, 2)) * 4.0, ["max", "min"])
        r = run_ew_topsis(m)
        np.testing.assert_array_equal(r.score_table.scores, [50, 50, 50])
        np.testing.assert_allclose(r.weight_vector.weights, [0.5, 0.5])

    def test_small_matrix_oracle(self, small_matrix):
        r = run_ew_topsis(small_matrix)
        scores, w = oracles.ew_topsis(small_matrix.values.tolist(), dirs_of(small_matrix))
        np.testing.assert_allclose(r.weight_vector.weights, w, atol=1e-12)
        np.testing.assert_allclose(r.score_table.scores, scores, atol=1e-9)
        assert r.score_table.rank.tolist() == oracles.ranks(scores, list(small_matrix.ids))

    def test_random_oracle(self, rng):
        for _ in range(20):
            m = random_matrix(rng)
            scores, _ = oracles.ew_topsis(m.values.tolist(), dirs_of(m))
            np.testing.assert_allclose(run_ew_topsis(m).score_table.scores, scores, atol=1e-9)


class TestQewTopsis:
    def test_single_indicator(self):
        m = IndicatorMatrix(list("abcd"), [[1.0], [3.0], [2.0], [7.0]], ["max"])
        r = run_q_ew_topsis(m)
        np.testing.assert_array_equal(r.weight_vector.weights, [1.0])
        assert r.score_table.rank.tolist() == [4, 2, 3, 1]

    def test_fixed_q_one_utility_matches_ew(self, rng):
        for _ in range(10):
            m = random_matrix(rng, n=int(rng.integers(2, 6)))
            base = run_ew_topsis(m)
            r = run_q_ew_topsis(m, config=ModelConfig(fixed_q=1.0, q_weight_mode="utility"))
            np.testing.assert_allclose(r.weight_vector.weights, base.weight_vector.weights, atol=1e-12)
            assert r.score_table.rank.tolist() == base.score_table.rank.tolist()
            assert r.q_roots is None and r.grey_report is None

    def test_chain_matches_hand_oracle(self, rng):
        cases = [six_by_four()] + [random_matrix(rng, m=int(rng.integers(3, 8)), n=4) for _ in range(40)]
        nontrivial = 0
        for m in cases:
            try:
                r = run_q_ew_topsis(m)
            except ValueError:
                # all-zero probability column etc.
                continue
            nontrivial += any(rt.q != 1.0 for rt in r.q_roots)
            self.check_chain(m, r)
        assert nontrivial >= 3

    @staticmethod
    def check_chain(m, r):
        rows, d = m.values.tolist(), dirs_of(m)

        base_scores, w_s = oracles.ew_topsis(rows, d)
        x = oracles.forward_normalize(rows, d)
        reference = [s / 100 for s in base_scores]
        n = len(d)
        grid = [0.001 + 0.0001 * k for k in range(41)]
        dists = []
        for xi in grid:
            _, _, w = oracles.grey(reference, x, xi)
            dists.append(sum((a - b) ** 2 for a, b in zip(w, w_s)))
        best = int(np.argmin(dists))
        _, _, w_r = oracles.grey(reference, x, grid[best])
        assert r.grey_report.xi_used == pytest.approx(grid[best], abs=1e-15)
        np.testing.assert_allclose(r.grey_report.weights.weights, w_r, atol=1e-12)

        P = oracles.probability(x)
        for j, root in enumerate(r.q_roots):
            col = oracles.column(P, j)
            if root.bracketed:
                if abs(root.q - 1) < 1e-9:
                    val = oracles.shannon_normalized(col)
                else:
                    val = oracles.tsallis_normalized(col, root.q)
                assert abs(val - w_r[j]) < 1e-8
            else:
                assert root.q == 1.0
        q = sum(rt.q for rt in r.q_roots) / n
        assert r.q_mean == pytest.approx(q, abs=1e-15)

        e = [oracles.tsallis_normalized(oracles.column(P, j), q) for j in range(n)]
        w_t = [v / sum(e) for v in e]
        np.testing.assert_allclose(r.weight_vector.weights, w_t, atol=1e-10)
        scores, _, _ = oracles.topsis_scores(x, w_t)
        np.testing.assert_allclose(r.score_table.scores, scores, atol=1e-8)

    def test_targets_equal_to_shannon_give_q_one(self, rng):
        P = probability_matrix(forward_normalize(random_matrix(rng, m=8, n=3)))
        for j in range(3):
            col = P.column(j)
            root = solve_q_detailed(col, shannon_entropy(col))
            assert root.q == 1.0

    def test_no_sweep_uses_fixed_xi(self, small_matrix):
        r = run_q_ew_topsis(small_matrix, GreyConfig(xi=0.25, use_sweep=False))
        assert r.sweep is None and r.grey_report.xi_used == 0.25

    def test_raw_entropy_mode_runs(self, small_matrix):
        r = run_q_ew_topsis(small_matrix, config=ModelConfig(normalize_entropy=False))
        assert abs(r.weight_vector.weights.sum() - 1) < 1e-12
        # baseline stays normalized
        np.testing.assert_allclose(
            r.baseline.weight_vector.weights, run_ew_topsis(small_matrix).weight_vector.weights
        )


class TestDiagnostics:
    def test_delta_self_is_zero(self, rng):
        w = WeightVector(rng.dirichlet(np.ones(5)), "x")
        delta, mean = delta_proportions(w, w)
        assert np.all(delta == 0) and mean == 0

    def test_delta_hand(self):
        delta, mean = delta_proportions(WeightVector([0.6, 0.4], "s"), WeightVector([0.5, 0.5], "t"))
        np.testing.assert_allclose(delta, [0.2, 0.2])
        assert mean == pytest.approx(0.2)

    def test_delta_needs_positive(self):
        with pytest.raises(ValueError):
            delta_proportions(WeightVector([0.5, 0.5], "s"), WeightVector([1.0, 0.0], "t"))

    def test_impact_self_is_zero(self, rng):
        t = ranked(rng.random(12), [f"i{k}" for k in range(12)])
        assert impact_rate(t, t) == (0, 0.0)

    def test_swap(self, rng):
        for m in (2, 5, 17):
            scores = np.arange(m, 0, -1, dtype=float)
            ids = [f"i{k:02d}" for k in range(m)]
            a = ranked(scores, ids)
            s2 = scores.copy()
            s2[[0, m - 1]] = s2[[m - 1, 0]]
            count, rate = impact_rate(a, ranked(s2, ids))
            assert count == 2 and rate == 2 / m

    def test_id_mismatch(self):
        with pytest.raises(ValueError):
            impact_rate(ranked([1, 2], ["a", "b"]), ranked([1, 2], ["a", "c"]))

    def test_compare_results(self, small_matrix):
        r = run_q_ew_topsis(small_matrix)
        d = compare_results(r.baseline, r)
        ws, wt = r.baseline.weight_vector.weights, r.weight_vector.weights
        np.testing.assert_allclose(d.delta_per_indicator, abs(ws - wt) / wt)
        changed = sum(
            a != b for a, b in zip(r.baseline.score_table.rank.tolist(), r.score_table.rank.tolist())
        )
        assert d.impact_count == changed and d.impact_rate == changed / 5


class TestCompareMethods:
    def test_all_methods(self, small_matrix):
        out = compare_methods(small_matrix)
        assert [r.method for r in out] == ["ew", "qew", "cv", "critic", "iw"]
        for r in out:
            assert not isinstance(r, MethodFailure)
            np.testing.assert_allclose(
                r.score_table.scores, run_method(small_matrix, r.method).score_table.scores
            )

    def test_single_indicator_isolates_failures(self):
        m = IndicatorMatrix(list("abc"), [[1.0], [2.0], [4.0]], ["max"])
        out = {r.method: r for r in compare_methods(m)}
        assert isinstance(out["critic"], MethodFailure)
        assert isinstance(out["iw"], MethodFailure)
        for name in ("ew", "qew", "cv"):
            assert not isinstance(out[name], MethodFailure)

    def test_identical_columns(self):
        col = np.array([1.0, 4.0, 2.0, 8.0])
        m = IndicatorMatrix(list("abcd"), np.column_stack([col, col, col]), ["max"] * 3)
        for r in compare_methods(m):
            assert not isinstance(r, MethodFailure)
            np.testing.assert_allclose(r.weight_vector.weights, [1 / 3] * 3, atol=1e-12)

    def test_unknown_method(self, small_matrix):
        with pytest.raises(ValueError):
            run_method(small_matrix, "ahp")


class TestRobustness:
    def test_full_data_zero_variance(self, rng):
        data = random_supply(rng, m=10)
        rep = robustness_sweep(data, [10, 10], seed=3)
        np.testing.assert_array_equal(rep.w0_var, 0)
        np.testing.assert_array_equal(rep.w1_var, 0)
        np.testing.assert_array_equal(rep.rel_err0, 0)

    def test_arithmetic(self, rng):
        data = random_supply(rng, m=15)
        rep = robustness_sweep(data, [6, 15], seed=11)
        gen = np.random.default_rng(11)
        idx = [np.sort(gen.choice(15, k, replace=False)) for k in (6, 15)]
        ws = []
        for k, ix in enumerate(idx):
            res = run_q_ew_topsis(derive_indicators(data.subset(ix.tolist())))
            np.testing.assert_array_equal(rep.w0[k], res.baseline.weight_vector.weights)
            np.testing.assert_array_equal(rep.w1[k], res.weight_vector.weights)
            ws.append(res.baseline.weight_vector.weights)
            assert rep.subsets[k] == tuple(data.ids[i] for i in ix)
        mean = (ws[0] + ws[1]) / 2
        np.testing.assert_allclose(rep.w0_mean, mean)
        np.testing.assert_allclose(rep.w0_var, ((ws[0] - mean) ** 2 + (ws[1] - mean) ** 2) / 2)
        np.testing.assert_allclose(rep.rel_err0[0], (ws[0] - mean) / mean)

    def test_deterministic(self, rng):
        data = random_supply(rng, m=12)
        a = robustness_sweep(data, [2, 7, 12], seed=5)
        b = robustness_sweep(data, [2, 7, 12], seed=5)
        np.testing.assert_array_equal(a.w1, b.w1)
        assert a.subsets == b.subsets

    @pytest.mark.parametrize("sizes", [[5], [1, 5], [5, 99]])
    def test_invalid_sizes(self, rng, sizes):
        with pytest.raises(ValueError):
            robustness_sweep(random_supply(rng, m=8), sizes, seed=0)


class TestReferenceComparison:
    def test_structure(self, small_matrix):
        rep = reference_comparison(run_q_ew_topsis(small_matrix))
        assert rep["asserted"] is False
        c = rep["computed"]
        assert len(c["q_values"]) == 4 and len(c["delta"]) == 4
        assert rep["published"]["xi"] == 0.0013
        assert rep["published"]["impact_rate"] == 0.2463

    def test_needs_full_result(self, small_matrix):
        with pytest.raises(ValueError):
            reference_comparison(run_ew_topsis(small_matrix))
