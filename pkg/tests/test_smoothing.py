
import numpy as np
import pytest

from tsbench.errors import NonPositiveData, SeriesTooShort
from tsbench.forecasters import ForecasterSpec, fit, fit_predict
from tsbench.forecasters.smoothing import fit_ses_alpha


def spec(**params):
    return ForecasterSpec("exp_smoothing", params)


def ses_sse_bruteforce(y, alpha, l0):
    level = l0
    sse = 0.0
    for x in y:
        sse += (x - level) ** 2
        level = alpha * x + (1 - alpha) * level
    return sse


class TestSes:
    def test_alpha_one_equals_naive_last(self):
        train = np.array([3.0, 9.0, 4.0, 7.0])
        out = fit_predict(spec(alpha=1.0), train, 3)
        np.testing.assert_allclose(out, [7.0, 7.0, 7.0], atol=1e-9)

    def test_half_alpha_single_step(self):
        # level after [0, 10] with alpha=0.5 and l0 = first value: 5
        out = fit_predict(spec(alpha=0.5, initialization="legacy_heuristic"), np.array([0.0, 10.0]), 2)
        np.testing.assert_allclose(out, [5.0, 5.0], atol=1e-12)

    def test_zero_alpha_freezes_initial_level(self):
        out = fit_predict(spec(alpha=1e-4, initialization="legacy_heuristic"), np.array([4.0, 9.0, 1.0]), 1)
        assert out[0] == pytest.approx(4.0, abs=5e-3)

    def test_heuristic_initial_level_is_head_mean(self):
        train = np.arange(1.0, 25.0)
        model = fit(spec(alpha=0.3, initialization="heuristic"), train)
        # replay the recursion from the documented starting level
        level = train[:10].mean()
        for x in train:
            level = 0.3 * x + 0.7 * level
        assert model.predict(1)[0] == pytest.approx(level, rel=1e-12)

    def test_estimated_ses_minimizes_sse(self):
        rng = np.random.RandomState(5)
        y = np.cumsum(rng.randn(80)) + 30
        model = fit(spec(), y)
        best = ses_sse_bruteforce(y, model.alpha, model.fitted[0])
        # no point on a dense grid may do meaningfully better
        for alpha in np.linspace(0.01, 0.99, 50):
            for l0 in np.linspace(y[:10].min(), y[:10].max(), 20):
                assert best <= ses_sse_bruteforce(y, alpha, l0) * (1 + 1e-6) + 1e-9

    def test_alpha_recovery_within_tenth(self):
        # innovations-form local level simulation with known alpha
        for true_alpha in (0.2, 0.5, 0.8):
            rng = np.random.RandomState(42)
            level, ys = 10.0, []
            for _ in range(300):
                eps = rng.randn()
                ys.append(level + eps)
                level += true_alpha * eps
            est = fit_ses_alpha(np.asarray(ys)).alpha
            assert abs(est - true_alpha) <= 0.1


class TestHoltAndSeasonal:
    def test_additive_trend_tracks_line(self):
        train = 3.0 + 2.0 * np.arange(30.0)
        out = fit_predict(spec(trend="add"), train, 3)
        expected = 3.0 + 2.0 * np.arange(30.0, 33.0)
        np.testing.assert_allclose(out, expected, rtol=1e-4)

    def test_damped_trend_flattens(self):
        train = 3.0 + 2.0 * np.arange(30.0)
        damped = fit_predict(spec(trend="add", damped=True, phi=0.8, alpha=0.5, beta=0.2), train, 30)
        undamped = fit_predict(spec(trend="add", alpha=0.5, beta=0.2), train, 30)
        assert damped[-1] < undamped[-1]

    def test_additive_seasonal_recovers_cycle(self):
        t = np.arange(48)
        season = np.array([3.0, -1.0, -2.0, 0.0])
        train = 20.0 + season[t % 4]
        out = fit_predict(spec(seasonal="add", sp=4), train, 8)
        expected = 20.0 + season[np.arange(48, 56) % 4]
        np.testing.assert_allclose(out, expected, atol=0.2)

    def test_multiplicative_seasonal_needs_positive_data(self):
        train = np.array([1.0, 2.0, 0.0, 2.0, 1.0, 2.0, 1.0, 2.0])
        with pytest.raises(NonPositiveData):
            fit(spec(seasonal="mul", sp=2), train)

    def test_seasonal_needs_two_cycles(self):
        with pytest.raises(SeriesTooShort):
            fit(spec(seasonal="add", sp=4), np.array([1.0, 2.0, 3.0, 4.0, 5.0]))

    def test_table_grid_configuration_runs(self):
        # the tuning grid wires smoothing_level/trend/damping names
        train = 5.0 + 0.3 * np.arange(24.0)
        out = fit_predict(
            spec(trend="add", smoothing_level=0.2, smoothing_trend=0.1, damping_trend=0.3,
                 initialization="heuristic"),
            train,
            4,
        )
        assert np.isfinite(out).all()


class TestAutoEts:
    def test_constant_series_selects_no_trend_no_seasonal(self):
        y = 5.0 + np.random.RandomState(1).randn(60) * 1e-3
        model = fit(ForecasterSpec("auto_ets", {"sp": 4}), y)
        _, trend_letter, seasonal_letter = model.selected
        assert trend_letter == "N" and seasonal_letter == "N"

    def test_winner_attains_minimum_aicc(self):
        t = np.arange(60)
        y = 10 + 0.2 * t + 2 * np.sin(2 * np.pi * t / 6) + np.random.RandomState(2).randn(60) * 0.2
        model = fit(ForecasterSpec("auto_ets", {"sp": 6}), y)
        best = min(aicc for _, aicc in model.candidates)
        mine = dict((tuple(tr), a) for tr, a in model.candidates)[model.selected]
        assert mine <= best + 1e-12
        for _, aicc in model.candidates:
            assert mine <= aicc

    def test_nonpositive_data_skips_multiplicative(self):
        y = np.sin(np.arange(40.0)) * 5.0  # crosses zero
        model = fit(ForecasterSpec("auto_ets", {"sp": 4}), y)
        for (error_letter, _, seasonal_letter), _ in model.candidates:
            assert error_letter != "M"
            assert seasonal_letter != "M"

    def test_trending_seasonal_selects_components(self):
        t = np.arange(72)
        y = 10 + 0.5 * t + 4 * np.sin(2 * np.pi * t / 12) + np.random.RandomState(3).randn(72) * 0.1
        model = fit(ForecasterSpec("auto_ets", {"sp": 12}), y)
        _, trend_letter, seasonal_letter = model.selected
        assert trend_letter in ("A", "Ad")
        assert seasonal_letter in ("A", "M")

    def test_forecast_length_and_finiteness(self):
        y = np.random.RandomState(4).rand(30) + 1.0
        model = fit(ForecasterSpec("auto_ets", {"sp": 1}), y)
        out = model.predict(7)
        assert out.shape == (7,) and np.isfinite(out).all()


class TestParameterSpellings:
    def test_long_form_component_names(self):
        train = 3.0 + 2.0 * np.arange(30.0)
        short = fit_predict(spec(trend="add", alpha=0.3, beta=0.1, initialization="heuristic"), train, 3)
        long = fit_predict(spec(trend="additive", alpha=0.3, beta=0.1, initialization="heuristic"), train, 3)
        np.testing.assert_array_equal(short, long)

    def test_bad_component_name_rejected(self):
        with pytest.raises(ValueError):
            fit(spec(trend="linear"), np.arange(10.0))

    def test_hyphenated_initialization_accepted(self):
        out = fit_predict(spec(alpha=0.4, initialization="legacy-heuristic"), np.array([2.0, 4.0, 6.0]), 1)
        assert np.isfinite(out).all()

    def test_out_of_range_parameters_rejected(self):
        with pytest.raises(ValueError):
            fit(spec(alpha=1.5), np.arange(10.0))
        with pytest.raises(ValueError):
            fit(spec(trend="add", damping_trend=0.0), np.arange(10.0))
