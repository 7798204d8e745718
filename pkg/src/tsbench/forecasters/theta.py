"""Theta forecaster: forecast two curvature-scaled lines and average them.

The two standard lines are used: the zero-curvature line (fit by ordinary
least squares and extrapolated) and the doubled-curvature line (forecast by
simple exponential smoothing with estimated alpha). A multiplicative
classical decomposition removes seasonality first when a 90%-level
autocorrelation test detects it, and the combined forecast is
reseasonalized afterwards.
"""

from __future__ import annotations

import numpy as np

from tsbench.core import TimeSeries
from tsbench.errors import NonPositiveData, SeriesTooShort
from tsbench.forecasters.base import FittedModel, ForecasterSpec, as_train_values
from tsbench.forecasters.smoothing import _centered_ma, fit_ses_alpha


def theta_line(values: np.ndarray, theta: float) -> np.ndarray:
    """Scale the series' deviations from its least-squares line by ``theta``.

    Equivalently, scale every second difference by ``theta`` while pinning
    the zero-curvature component to the fitted regression line: theta = 1
    reproduces the input exactly, theta = 0 is the line itself.
    """
    x = np.asarray(values, dtype=float)
    if x.size < 3:
        raise SeriesTooShort(f"theta line needs at least 3 points, got {x.size}")
    t = np.arange(x.size, dtype=float)
    slope, intercept = np.polyfit(t, x, 1)
    line = intercept + slope * t
    return theta * x + (1.0 - theta) * line


def autocorrelation(values: np.ndarray, lag: int) -> float:
    x = np.asarray(values, dtype=float)
    x = x - x.mean()
    denom = float((x**2).sum())
    if denom == 0.0:
        return 0.0
    return float((x[lag:] * x[:-lag]).sum() / denom)


def is_seasonal(values: np.ndarray, sp: int, z: float = 1.645) -> bool:
    """Seasonality test: lag-sp autocorrelation against its 90% band."""
    x = np.asarray(values, dtype=float)
    if sp < 2 or x.size < 3 * sp:
        return False
    r_sum = sum(autocorrelation(x, k) ** 2 for k in range(1, sp))
    limit = z * np.sqrt((1.0 + 2.0 * r_sum) / x.size)
    return abs(autocorrelation(x, sp)) > limit


def seasonal_indices(values: np.ndarray, sp: int) -> np.ndarray:
    """Multiplicative classical-decomposition indices, mean-normalized."""
    x = np.asarray(values, dtype=float)
    trend = _centered_ma(x, sp)
    valid = ~np.isnan(trend)
    ratios = np.full(x.size, np.nan)
    ok = valid & (trend != 0)
    ratios[ok] = x[ok] / trend[ok]
    idx = np.empty(sp)
    for k in range(sp):
        vals = ratios[k::sp]
        vals = vals[~np.isnan(vals)]
        idx[k] = vals.mean() if vals.size else 1.0
    mean = idx.mean()
    return idx / mean if mean != 0 else np.ones(sp)


class ThetaModel(FittedModel):
    def __init__(
        self,
        spec: ForecasterSpec,
        n: int,
        intercept: float,
        slope: float,
        ses_level: float,
        seasonal: np.ndarray | None,
        sp: int,
    ):
        super().__init__(spec, n)
        self.intercept = intercept
        self.slope = slope
        self.ses_level = ses_level
        self.seasonal = seasonal
        self.sp = sp

    def _point_forecast(self, h: int) -> np.ndarray:
        n = self.train_length
        steps = np.arange(n, n + h, dtype=float)  # 0-based future indices
        line = self.intercept + self.slope * steps
        combined = 0.5 * line + 0.5 * self.ses_level
        if self.seasonal is not None:
            tiled = self.seasonal[(np.arange(n, n + h)) % self.sp]
            combined = combined * tiled
        return combined


def fit_theta(spec: ForecasterSpec, train: TimeSeries | np.ndarray) -> ThetaModel:
    p = spec.params
    theta = float(p.get("theta", 2.0))
    sp = int(p.get("sp", 1) or 1)
    deseasonalize = bool(p.get("deseasonalize", True))
    y = as_train_values(train, 3, "theta")

    seasonal = None
    work = y
    if deseasonalize and sp >= 2:
        if np.any(y <= 0):
            raise NonPositiveData("theta deseasonalization is multiplicative and needs positive values")
        if is_seasonal(y, sp):
            seasonal = seasonal_indices(y, sp)
            work = y / seasonal[np.arange(y.size) % sp]

    t = np.arange(work.size, dtype=float)
    slope, intercept = np.polyfit(t, work, 1)
    curved = theta_line(work, theta)
    ses = fit_ses_alpha(curved)
    return ThetaModel(spec, work.size, float(intercept), float(slope), float(ses.level), seasonal, sp)
