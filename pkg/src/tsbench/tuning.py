"""Preprocessing pipeline and random-search hyperparameter tuning.

The pipeline wraps a forecaster with optional standard scaling and Box-Cox
transforms (applied in that order, inverted in reverse). Random search
samples parameter combinations uniformly with replacement from per-method
candidate grids, scores each on a holdout window cut from the end of the
training segment, and hands the winner back for a full-train refit. The
final test window is never touched here.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from tsbench.core import TimeSeries
from tsbench.errors import AllTrialsFailed, ForecastError, NonPositiveData, TsbenchError
from tsbench.forecasters import ForecasterSpec, fit
from tsbench.metrics import score

BOXCOX_GRID = np.linspace(-1.0, 2.0, 61)

# below this the power transform is numerically the log transform (and
# subnormal-range lambdas would otherwise shred the quotient's precision)
_LOG_LAMBDA = 1e-10


def box_cox(values, lam: float) -> np.ndarray:
    """Box-Cox transform; lam = 0 is the log transform.

    Evaluated as expm1(lam*log(x))/lam, which stays accurate as lam -> 0.
    """
    x = np.asarray(values, dtype=float)
    if np.any(x <= 0):
        raise NonPositiveData("box-cox requires strictly positive values")
    if abs(lam) < _LOG_LAMBDA:
        return np.log(x)
    return np.expm1(lam * np.log(x)) / lam


def inverse_box_cox(values, lam: float) -> np.ndarray:
    y = np.asarray(values, dtype=float)
    if abs(lam) < _LOG_LAMBDA:
        return np.exp(y)
    # forecasts can leave the transform's range; clamp to its boundary
    arg = np.clip(lam * y, -1.0 + 1e-15, None)
    return np.exp(np.log1p(arg) / lam)


def box_cox_lambda(values, grid: np.ndarray = BOXCOX_GRID) -> float:
    """Profile-likelihood lambda over a fixed grid."""
    x = np.asarray(values, dtype=float)
    if np.any(x <= 0):
        raise NonPositiveData("box-cox requires strictly positive values")
    n = x.size
    log_sum = float(np.log(x).sum())
    best_lam, best_ll = float(grid[0]), -math.inf
    for lam in grid:
        z = box_cox(x, float(lam))
        var = float(z.var())
        if var <= 0:
            continue
        ll = -0.5 * n * math.log(var) + (lam - 1.0) * log_sum
        if ll > best_ll:
            best_lam, best_ll = float(lam), ll
    return best_lam


@dataclass(frozen=True)
class Pipeline:
    """A forecaster plus optional preprocessing transforms."""

    inner: ForecasterSpec
    standardize: bool = False
    boxcox: bool = False
    lam: float | None = None


def pipeline_fit_predict(pipeline: Pipeline, train: TimeSeries | np.ndarray, h: int) -> np.ndarray:
    """Transform, fit the inner forecaster, predict, back-transform."""
    values = train.values if isinstance(train, TimeSeries) else np.asarray(train, dtype=float)
    work = np.asarray(values, dtype=float)
    mean = std = 0.0
    if pipeline.standardize:
        mean = float(work.mean())
        std = float(work.std())
        if std == 0.0:
            std = 1.0
        work = (work - mean) / std
    lam = pipeline.lam
    if pipeline.boxcox:
        if lam is None:
            lam = box_cox_lambda(work)
        work = box_cox(work, lam)
    forecast = fit(pipeline.inner, work).predict(h)
    if pipeline.boxcox:
        forecast = inverse_box_cox(forecast, lam)
    if pipeline.standardize:
        forecast = forecast * std + mean
    return forecast


#: Tunable parameter grids per method. Methods with a seasonal-period
#: argument take it from the data, so sp is not part of the grids.
DEFAULT_SEARCH_SPACES: dict[str, dict[str, list[Any]]] = {
    "naive": {"strategy": ["last", "mean", "drift"]},
    "stl": {
        "seasonal_deg": [0, 1, 2],
        "trend_deg": [0, 1, 2],
        "seasonal_jump": [1, 2, 3],
        "trend_jump": [1, 2, 3],
        "robust": [True, False],
    },
    "theta": {"deseasonalize": [True, False]},
    "trend": {"regressor": ["ols", "ridge", "tree"]},
    "poly_trend": {"regressor": ["ols", "ridge", "tree"], "degree": [1, 2, 3]},
    "exp_smoothing": {
        "smoothing_level": [0.1, 0.2, 0.3],
        "smoothing_trend": [0.1, 0.2, 0.3],
        "damping_trend": [0.2, 0.3, 0.4],
        "initialization": ["heuristic", "legacy_heuristic", "estimated"],
        "trend": ["add"],
    },
}


@dataclass(frozen=True)
class Trial:
    params: dict[str, Any]
    score: float


@dataclass(frozen=True)
class TuningResult:
    trials: tuple[Trial, ...]
    best: dict[str, Any]
    best_score: float
    seed: int

    def __post_init__(self) -> None:
        finite = [t.score for t in self.trials if math.isfinite(t.score)]
        if finite and self.best_score > min(finite):
            raise ValueError("best_score must attain the minimum trial score")


def sample_configuration(space: Mapping[str, Sequence[Any]], rng: random.Random) -> dict[str, Any]:
    """One uniform draw per parameter, in sorted key order for determinism."""
    return {key: rng.choice(list(space[key])) for key in sorted(space)}


def random_search(
    space: Mapping[str, Sequence[Any]],
    template: ForecasterSpec,
    train: TimeSeries | np.ndarray,
    h: int,
    n_iter: int = 20,
    seed: int = 0,
    scoring: str = "smape",
    *,
    pipeline: Pipeline | None = None,
    mase_m: int = 1,
) -> tuple[TuningResult, ForecasterSpec]:
    """Random search over a parameter space with a tail holdout window.

    The last h points of ``train`` form the validation window; failed
    configurations score +inf. Returns the trace and the winning spec
    (refit-ready; the caller fits it on the full training data).
    """
    if n_iter < 1:
        raise ValueError(f"n_iter must be >= 1, got {n_iter}")
    values = train.values if isinstance(train, TimeSeries) else np.asarray(train, dtype=float)
    if values.size <= 2 * h:
        raise TsbenchError(f"tuning needs more than {2 * h} points, got {values.size}")
    fit_part, valid_part = values[:-h], values[-h:]

    rng = random.Random(seed)
    trials: list[Trial] = []
    best_idx = -1
    for _ in range(n_iter):
        params = sample_configuration(space, rng)
        candidate = template.with_params(**params)
        try:
            if pipeline is not None:
                forecast = pipeline_fit_predict(
                    Pipeline(candidate, pipeline.standardize, pipeline.boxcox, pipeline.lam), fit_part, h
                )
            else:
                forecast = fit(candidate, fit_part).predict(h)
            value = score(scoring, valid_part, forecast, train=fit_part, m=mase_m)
        except (ForecastError, TsbenchError):
            value = math.inf
        trials.append(Trial(params=params, score=value))
        if best_idx < 0 or value < trials[best_idx].score:
            best_idx = len(trials) - 1
    if not math.isfinite(trials[best_idx].score):
        raise AllTrialsFailed(f"all {n_iter} sampled configurations failed on the validation window")
    best = trials[best_idx].params
    result = TuningResult(tuple(trials), dict(best), trials[best_idx].score, seed)
    return result, template.with_params(**best)


def tune_dataset(
    trains: Sequence[np.ndarray | TimeSeries],
    h: int,
    template: ForecasterSpec,
    space: Mapping[str, Sequence[Any]],
    n_iter: int = 20,
    seed: int = 0,
    scoring: str = "smape",
    *,
    pipeline: Pipeline | None = None,
    mase_m: int = 1,
) -> tuple[TuningResult, ForecasterSpec]:
    """Dataset-level random search: one configuration sequence, scored by
    the mean validation metric across series.

    Series too short for a validation holdout (length <= 2h) carry no
    signal and are skipped; a forecaster failure on any usable series sinks
    that configuration to +inf.
    """
    if n_iter < 1:
        raise ValueError(f"n_iter must be >= 1, got {n_iter}")
    arrays = [t.values if isinstance(t, TimeSeries) else np.asarray(t, dtype=float) for t in trains]
    usable = [a for a in arrays if a.size > 2 * h]
    if not usable:
        raise AllTrialsFailed(f"no series is long enough (> {2 * h} points) for a validation holdout")

    rng = random.Random(seed)
    trials: list[Trial] = []
    best_idx = -1
    for _ in range(n_iter):
        params = sample_configuration(space, rng)
        candidate = template.with_params(**params)
        per_series: list[float] = []
        for values in usable:
            fit_part, valid_part = values[:-h], values[-h:]
            try:
                if pipeline is not None:
                    forecast = pipeline_fit_predict(
                        Pipeline(candidate, pipeline.standardize, pipeline.boxcox, pipeline.lam),
                        fit_part,
                        h,
                    )
                else:
                    forecast = fit(candidate, fit_part).predict(h)
                per_series.append(score(scoring, valid_part, forecast, train=fit_part, m=mase_m))
            except (ForecastError, TsbenchError):
                per_series = []
                break
        value = float(np.mean(per_series)) if per_series else math.inf
        trials.append(Trial(params=params, score=value))
        if best_idx < 0 or value < trials[best_idx].score:
            best_idx = len(trials) - 1
    if not math.isfinite(trials[best_idx].score):
        raise AllTrialsFailed(f"all {n_iter} sampled configurations failed on the validation windows")
    best = trials[best_idx].params
    result = TuningResult(tuple(trials), dict(best), trials[best_idx].score, seed)
    return result, template.with_params(**best)
