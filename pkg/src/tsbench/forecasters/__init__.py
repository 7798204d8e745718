"""Forecaster catalog: a uniform fit/predict surface over every method.

Every forecaster is fit deterministically from (spec, train); repeated fits
are bit-identical. ``predict`` returns exactly h finite values or raises a
declared error.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from tsbench.core import TimeSeries
from tsbench.forecasters.arima import ArimaOrder, fit_arima, fit_auto_arima, kpss_statistic, ndiffs
from tsbench.forecasters.base import FittedModel, ForecasterSpec, as_train_values
from tsbench.forecasters.naive import fit_naive, fit_seasonal_naive
from tsbench.forecasters.smoothing import fit_auto_ets, fit_exp_smoothing
from tsbench.forecasters.stl import StlParams, fit_stl, loess_smooth, stl_decompose
from tsbench.forecasters.theta import fit_theta, theta_line
from tsbench.forecasters.trend import fit_poly_trend, fit_trend

_FitFunc = Callable[[ForecasterSpec, "TimeSeries | np.ndarray"], FittedModel]

REGISTRY: dict[str, _FitFunc] = {
    "naive": fit_naive,
    "seasonal_naive": fit_seasonal_naive,
    "trend": fit_trend,
    "poly_trend": fit_poly_trend,
    "exp_smoothing": fit_exp_smoothing,
    "auto_ets": fit_auto_ets,
    "theta": fit_theta,
    "stl": fit_stl,
    "auto_arima": fit_auto_arima,
}

METHODS = tuple(sorted(REGISTRY))


def fit(spec: ForecasterSpec, train: TimeSeries | np.ndarray) -> FittedModel:
    """Fit a forecaster spec on a missing-free training series."""
    if spec.method not in REGISTRY:
        raise ValueError(f"unknown method {spec.method!r}; known: {METHODS}")
    return REGISTRY[spec.method](spec, train)


def fit_predict(spec: ForecasterSpec, train: TimeSeries | np.ndarray, h: int) -> np.ndarray:
    return fit(spec, train).predict(h)


__all__ = [
    "ArimaOrder",
    "FittedModel",
    "ForecasterSpec",
    "METHODS",
    "REGISTRY",
    "StlParams",
    "as_train_values",
    "fit",
    "fit_arima",
    "fit_auto_arima",
    "fit_auto_ets",
    "fit_exp_smoothing",
    "fit_naive",
    "fit_poly_trend",
    "fit_predict",
    "fit_seasonal_naive",
    "fit_stl",
    "fit_theta",
    "fit_trend",
    "kpss_statistic",
    "loess_smooth",
    "ndiffs",
    "stl_decompose",
    "theta_line",
]
