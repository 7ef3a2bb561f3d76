import numpy as np
import pytest

import oracles
from qewtopsis import (
    GreyConfig,
    NormalizedMatrix,
    WeightVector,
    gra_weights,
    grey_relation,
    relational_coefficients,
    relational_degrees,
    xi_grid,
    xi_sweep,
)


class TestCoefficients:
    def test_identical_column(self, rng):
        s = rng.random(5)
        x = np.column_stack([s, rng.random(5)])
        coef = relational_coefficients(s, NormalizedMatrix(x), 0.5)
        np.testing.assert_array_equal(coef[:, 0], 1.0)

    def test_all_identical(self):
        s = np.array([0.2, 0.4, 0.6])
        coef = relational_coefficients(s, np.column_stack([s, s]), 0.3)
        np.testing.assert_array_equal(coef, 1.0)

    def test_hand_instance(self):
        s = [0.9, 0.5, 0.3, 0.1]
        x = [[1.0, 0.8], [0.4, 0.5], [0.0, 0.6], [0.2, 0.0]]
        coef = relational_coefficients(s, np.array(x), 0.5)
        # deltas: [.1,.1],[.1,0],[.3,.3],[.1,.1]; min 0, max .3
        assert coef[1, 1] == 1.0
        assert coef[2, 0] == pytest.approx(0.15 / 0.45)
        assert coef[0, 0] == pytest.approx(0.15 / 0.25)
        expected, _, _ = oracles.grey(s, x, 0.5)
        np.testing.assert_allclose(coef, expected, atol=1e-15)

    def test_bounds_and_monotonicity(self, rng):
        for _ in range(30):
            s, x = rng.random(8), rng.random((8, 3))
            coef = relational_coefficients(s, x, 0.2)
            delta = np.abs(s[:, None] - x)
            assert np.all((coef > 0) & (coef <= 1))
            np.testing.assert_array_equal(coef == 1, delta == delta.min())
            order = np.argsort(delta, axis=None)
            assert np.all(np.diff(coef.ravel()[order]) <= 1e-15)

    def test_scale_check(self):
        with pytest.raises(ValueError, match="unit scale"):
            relational_coefficients([1.5, 0.2], np.ones((2, 1)) * 0.5, 0.5)

    def test_shape_check(self):
        with pytest.raises(ValueError):
            relational_coefficients([0.5, 0.2, 0.1], np.ones((2, 1)), 0.5)


class TestDegreesAndWeights:
    def test_all_ones(self):
        np.testing.assert_array_equal(relational_degrees(np.ones((4, 3))), [1, 1, 1])

    def test_mean(self):
        assert relational_degrees([[0.2], [0.4]])[0] == pytest.approx(0.3)

    def test_random_degrees(self, rng):
        c = rng.random((6, 4))
        np.testing.assert_allclose(relational_degrees(c), [sum(c[:, j]) / 6 for j in range(4)])

    def test_weights(self, rng):
        np.testing.assert_allclose(gra_weights([2, 2, 2]).weights, [1 / 3] * 3)
        np.testing.assert_allclose(gra_weights([1, 3]).weights, [0.25, 0.75])
        g = rng.random(5) + 0.1
        np.testing.assert_allclose(gra_weights(g).weights, g / sum(g.tolist()))

    def test_non_positive(self):
        with pytest.raises(ValueError):
            gra_weights([1.0, 0.0])

    def test_report_matches_oracle(self, rng):
        s, x = rng.random(9), rng.random((9, 4))
        r = grey_relation(s, x, 0.003)
        coef, deg, w = oracles.grey(s.tolist(), x.tolist(), 0.003)
        np.testing.assert_allclose(r.coefficients, coef, atol=1e-12)
        np.testing.assert_allclose(r.degrees, deg, atol=1e-12)
        np.testing.assert_allclose(r.weights.weights, w, atol=1e-12)
        assert r.xi_used == 0.003


class TestSweep:
    def test_default_grid(self):
        g = xi_grid(0.001, 0.005, 0.0001)
        assert g.size == 41
        assert g[0] == 0.001 and g[-1] == 0.005 and g[3] == 0.0013

    def test_grid_not_a_multiple(self):
        np.testing.assert_allclose(xi_grid(0.1, 0.35, 0.1), [0.1, 0.2, 0.3])

    def test_single_point(self, rng):
        s, x = rng.random(5), rng.random((5, 2))
        res = xi_sweep(s, x, WeightVector([0.5, 0.5], "shannon"), GreyConfig(sweep_start=0.002, sweep_end=0.002))
        assert res.best_xi == 0.002 and res.grid.size == 1

    def test_exact_match_selected(self, rng):
        s, x = rng.random(7), rng.random((7, 3))
        target = grey_relation(s, x, 0.0027).weights
        res = xi_sweep(s, x, target)
        assert res.best_xi == 0.0027
        assert res.distances.min() == 0.0

    def test_exhaustive(self, rng):
        s, x = rng.random(10), rng.random((10, 4))
        base = WeightVector(rng.dirichlet(np.ones(4)), "shannon")
        res = xi_sweep(s, x, base)
        dists = []
        for xi in [0.001 + 0.0001 * k for k in range(41)]:
            _, _, w = oracles.grey(s.tolist(), x.tolist(), xi)
            dists.append(sum((a - b) ** 2 for a, b in zip(w, base.weights)) ** 0.5)
        assert res.best_xi == pytest.approx(0.001 + 0.0001 * int(np.argmin(dists)), abs=1e-15)
        assert 0.001 <= res.best_xi <= 0.005


class TestConfig:
    def test_defaults(self):
        c = GreyConfig()
        assert (c.sweep_start, c.sweep_end, c.sweep_step) == (0.001, 0.005, 0.0001)

    @pytest.mark.parametrize(
        "kwargs", [dict(xi=0), dict(xi=1.2), dict(sweep_start=0.01, sweep_end=0.005), dict(sweep_step=0)]
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            GreyConfig(**kwargs)

    def test_warning_threshold(self, caplog):
        GreyConfig(xi=0.8, use_sweep=False)
        assert "resolution" in caplog.text
