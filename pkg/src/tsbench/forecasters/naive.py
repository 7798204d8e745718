"""Naive and seasonal-naive forecasters."""

from __future__ import annotations

import numpy as np

from tsbench.core import TimeSeries
from tsbench.errors import SeriesTooShort
from tsbench.forecasters.base import FittedModel, ForecasterSpec, as_train_values

STRATEGIES = ("last", "mean", "drift")


class NaiveModel(FittedModel):
    def __init__(self, spec: ForecasterSpec, train: np.ndarray, strategy: str, sp: int):
        super().__init__(spec, train.size)
        self.strategy = strategy
        self.sp = sp
        n = train.size
        if strategy == "last":
            self.season = train[n - sp :].copy() if sp > 1 else np.array([train[-1]])
        elif strategy == "mean":
            if sp > 1:
                # per-position means, rolled so season[0] is the step after train
                per_pos = np.array([train[k::sp].mean() for k in range(sp)])
                self.season = np.roll(per_pos, -(n % sp))
            else:
                self.season = np.array([train.mean()])
        else:  # drift
            self.last = float(train[-1])
            self.slope = float((train[-1] - train[0]) / (n - 1))

    def _point_forecast(self, h: int) -> np.ndarray:
        if self.strategy == "drift":
            return self.last + self.slope * np.arange(1, h + 1)
        reps = -(-h // self.season.size)
        return np.tile(self.season, reps)[:h]


def fit_naive(spec: ForecasterSpec, train: TimeSeries | np.ndarray) -> NaiveModel:
    strategy = spec.params.get("strategy", "last")
    if strategy not in STRATEGIES:
        raise ValueError(f"naive strategy must be one of {STRATEGIES}, got {strategy!r}")
    sp = int(spec.params.get("sp", 1) or 1)
    min_len = 2 if strategy == "drift" else max(1, sp if strategy == "last" else 1)
    values = as_train_values(train, min_len, "naive")
    if strategy == "last" and sp > 1 and values.size < sp:
        raise SeriesTooShort(f"seasonal naive needs >= sp={sp} points, got {values.size}")
    return NaiveModel(spec, values, strategy, sp)


def fit_seasonal_naive(spec: ForecasterSpec, train: TimeSeries | np.ndarray) -> NaiveModel:
    """Repeat the last full season: forecast[i] = train[n - sp + (i mod sp)]."""
    sp = int(spec.params.get("sp", 1) or 1)
    values = as_train_values(train, max(1, sp), "seasonal_naive")
    if values.size < sp:
        raise SeriesTooShort(f"seasonal naive needs >= sp={sp} points, got {values.size}")
    return NaiveModel(spec, values, "last", sp)
