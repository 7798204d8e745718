import numpy as np
import pytest

from tsbench.errors import SeriesTooShort
from tsbench.forecasters import (
    ForecasterSpec,
    fit_arima,
    fit_auto_arima,
    fit_predict,
    kpss_statistic,
    ndiffs,
)


def arima_spec(**params):
    return ForecasterSpec("auto_arima", params)


def simulate_ar1(phi, n, seed, mean=0.0, sigma=1.0):
    rng = np.random.RandomState(seed)
    y = np.empty(n)
    y[0] = mean
    for t in range(1, n):
        y[t] = mean + phi * (y[t - 1] - mean) + rng.randn() * sigma
    return y


class TestFixedOrders:
    def test_random_walk_equals_naive_last(self):
        y = np.cumsum(np.random.RandomState(3).randn(60)) + 5
        model = fit_arima(arima_spec(), y, order=(0, 1, 0), with_constant=False)
        np.testing.assert_allclose(model.predict(4), np.full(4, y[-1]), atol=1e-12)

    def test_constant_only_model_forecasts_mean(self):
        y = np.random.RandomState(4).randn(50) + 12.0
        model = fit_arima(arima_spec(), y, order=(0, 0, 0), with_constant=True)
        np.testing.assert_allclose(model.predict(3), np.full(3, y.mean()), atol=1e-6)

    def test_ar1_coefficient_recovery(self):
        y = simulate_ar1(0.7, 400, seed=0, mean=3.0)
        model = fit_arima(arima_spec(), y, order=(1, 0, 0), with_constant=True)
        assert model.order.phi_coeffs[0] == pytest.approx(0.7, abs=0.1)

    def test_too_short_after_differencing(self):
        with pytest.raises(SeriesTooShort):
            fit_arima(arima_spec(), np.array([1.0, 2.0, 3.0, 4.0]), order=(0, 2, 0))

    def test_forecast_integrates_drift(self):
        # d=1 with no constant: differenced forecast is an AR forecast of
        # increments; a deterministic ramp yields increments ~ 1
        y = np.arange(40.0) * 1.0
        model = fit_arima(arima_spec(), y, order=(1, 1, 0), with_constant=False)
        out = model.predict(3)
        assert out[0] > y[-1] - 1e-6


class TestDifferencingTest:
    def test_stationary_series_kpss_small(self):
        y = np.random.RandomState(5).randn(200)
        assert kpss_statistic(y) < 0.463

    def test_random_walk_kpss_large(self):
        y = np.cumsum(np.random.RandomState(6).randn(300))
        assert kpss_statistic(y) > 0.463

    def test_ndiffs(self):
        stationary = np.random.RandomState(7).randn(150)
        walk = np.cumsum(np.random.RandomState(8).randn(150))
        double = np.cumsum(np.cumsum(np.random.RandomState(9).randn(200)))
        assert ndiffs(stationary) == 0
        assert ndiffs(walk) == 1
        assert ndiffs(double) == 2

    def test_constant_series_is_stationary(self):
        assert ndiffs(np.full(30, 3.0)) == 0


class TestAutoSearch:
    def test_winner_minimizes_ic_over_trace(self):
        y = simulate_ar1(0.6, 120, seed=10, mean=5.0)
        model = fit_auto_arima(arima_spec(ic="aicc"), y)
        assert model.search_trace, "search must record the evaluated candidates"
        best_ic = min(ic for _, _, ic in model.search_trace)
        chosen = [ic for p, q, ic in model.search_trace if (p, q) == (model.order.p, model.order.q)]
        assert chosen and chosen[0] <= best_ic + 1e-9

    def test_search_stays_within_bounds(self):
        y = simulate_ar1(0.4, 80, seed=11)
        model = fit_auto_arima(arima_spec(), y)
        for p, q, _ in model.search_trace:
            assert 0 <= p <= 5 and 0 <= q <= 5
        assert 0 <= model.order.d <= 2

    def test_random_walk_selects_d1(self):
        y = np.cumsum(np.random.RandomState(12).randn(150)) + 40
        model = fit_auto_arima(arima_spec(), y)
        assert model.order.d == 1

    def test_deterministic_across_runs(self):
        y = simulate_ar1(0.5, 90, seed=13, mean=2.0)
        a = fit_auto_arima(arima_spec(), y)
        b = fit_auto_arima(arima_spec(), y)
        assert (a.order.p, a.order.d, a.order.q) == (b.order.p, b.order.d, b.order.q)
        np.testing.assert_array_equal(a.predict(5), b.predict(5))

    def test_minimum_length_enforced(self):
        with pytest.raises(SeriesTooShort):
            fit_auto_arima(arima_spec(), np.arange(9.0))

    def test_ic_variants_accepted(self):
        y = simulate_ar1(0.3, 60, seed=14)
        for ic in ("aic", "aicc", "bic"):
            model = fit_auto_arima(arima_spec(ic=ic), y)
            assert np.isfinite(model.predict(3)).all()

    def test_registry_dispatch(self):
        y = simulate_ar1(0.5, 60, seed=15, mean=1.0)
        out = fit_predict(arima_spec(), y, 4)
        assert out.shape == (4,) and np.isfinite(out).all()


class TestForecastStructure:
    def test_ar1_forecast_decays_geometrically_to_mean(self):
        y = simulate_ar1(0.6, 200, seed=20, mean=10.0)
        model = fit_arima(arima_spec(), y, order=(1, 0, 0), with_constant=True)
        phi = model.order.phi_coeffs[0]
        mu = model.order.constant / (1.0 - phi)
        out = model.predict(6)
        expected = mu + (phi ** np.arange(1, 7)) * (y[-1] - mu)
        np.testing.assert_allclose(out, expected, rtol=1e-8)

    def test_ma1_forecast_is_mean_beyond_one_step(self):
        rng = np.random.RandomState(21)
        eps = rng.randn(300)
        y = 5.0 + eps[1:] + 0.5 * eps[:-1]
        model = fit_arima(arima_spec(), y, order=(0, 0, 1), with_constant=True)
        out = model.predict(4)
        # steps 2..4 revert to the unconditional mean exactly
        np.testing.assert_allclose(out[1:], np.full(3, model._fit.mean), rtol=1e-10)
        assert abs(out[0] - model._fit.mean) > 1e-6  # step 1 uses the last residual
