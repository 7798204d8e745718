"""Uniform fit/predict contract shared by every forecaster."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from tsbench.core import TimeSeries
from tsbench.errors import NonFinitePrediction, SeriesTooShort


@dataclass(frozen=True)
class ForecasterSpec:
    """A method identifier plus its parameter record.

    ``name`` labels this configuration in records and reports; it defaults
    to the method identifier.
    """

    method: str
    params: Mapping[str, Any] = field(default_factory=dict)
    name: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", dict(self.params))
        if self.name is None:
            object.__setattr__(self, "name", self.method)

    def with_params(self, **updates: Any) -> "ForecasterSpec":
        merged = {**self.params, **updates}
        return ForecasterSpec(self.method, merged, self.name)

    def with_default_sp(self, sp: int) -> "ForecasterSpec":
        """Fill the seasonal period when the user left it unset."""
        if "sp" in self.params and self.params["sp"] is not None:
            return self
        return self.with_params(sp=int(sp))


class FittedModel:
    """Fitted state; ``predict`` may be called repeatedly with any horizon."""

    def __init__(self, spec: ForecasterSpec, train_length: int):
        self.spec = spec
        self.train_length = int(train_length)

    def _point_forecast(self, h: int) -> np.ndarray:
        raise NotImplementedError

    def predict(self, h: int) -> np.ndarray:
        if int(h) < 1:
            raise ValueError(f"horizon must be >= 1, got {h}")
        out = np.asarray(self._point_forecast(int(h)), dtype=float)
        if out.shape != (int(h),):
            raise NonFinitePrediction(f"forecast has shape {out.shape}, expected ({h},)")
        if not np.isfinite(out).all():
            raise NonFinitePrediction(f"{self.spec.method} produced non-finite forecast values")
        return out


def as_train_values(train: TimeSeries | np.ndarray, min_length: int, method: str) -> np.ndarray:
    """Validate and extract a missing-free training array."""
    values = train.values if isinstance(train, TimeSeries) else np.asarray(train, dtype=float)
    values = np.asarray(values, dtype=float).ravel()
    if values.size < min_length:
        raise SeriesTooShort(f"{method} needs at least {min_length} points, got {values.size}")
    if np.isnan(values).any():
        raise ValueError(f"{method} requires missing-free input; impute first (e.g. locf)")
    if not np.isfinite(values).all():
        raise ValueError(f"{method} requires finite training values")
    return values
