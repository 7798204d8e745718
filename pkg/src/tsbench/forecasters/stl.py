"""Season-trend decomposition by LOESS, and the forecaster built on it.

The decomposition follows the classical inner-loop procedure:
cycle-subseries LOESS smoothing (extended one season each side), a triple
moving-average low-pass filter with a degree-1 LOESS polish, and trend
LOESS on the deseasonalized series. The robust variant adds two outer
iterations of bisquare weighting. The three components always add back to
the input exactly (the residual is defined as the remainder).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tsbench.core import TimeSeries
from tsbench.errors import PeriodTooSmall, SeriesTooShort, SingularDesign
from tsbench.forecasters.base import FittedModel, ForecasterSpec, as_train_values


def tricube(u: np.ndarray) -> np.ndarray:
    w = np.clip(1.0 - np.abs(u) ** 3, 0.0, None)
    return w**3


def loess_smooth(
    x: np.ndarray,
    y: np.ndarray,
    weights: np.ndarray | None,
    at: np.ndarray,
    degree: int,
    span: int,
    *,
    fallback_unweighted: bool = False,
) -> np.ndarray:
    """Locally weighted polynomial smoothing evaluated at ``at``.

    At each query point a degree-``degree`` polynomial is fit over the
    ``span`` nearest neighbours with tricube distance weights times the
    supplied robustness weights. Spans larger than the data stretch the
    tricube bandwidth by span/n, so far queries keep positive weights.

    With ``fallback_unweighted`` (the robust STL inner loop), a
    neighbourhood whose robustness weights vanish entirely falls back to
    the distance-only fit instead of raising SingularDesign.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    at = np.asarray(at, dtype=float)
    n = x.size
    if degree not in (0, 1, 2):
        raise ValueError(f"loess degree must be 0, 1, or 2, got {degree}")
    if span < degree + 1:
        raise ValueError(f"span {span} too small for degree {degree}")
    rho = np.ones(n) if weights is None else np.asarray(weights, dtype=float)

    out = np.empty(at.size)
    for i, q in enumerate(at):
        dist = np.abs(x - q)
        order = np.argsort(dist, kind="stable")
        k = min(span, n)
        lam = dist[order[k - 1]]
        if span > n:
            lam *= span / n
        if lam <= 0:
            # all neighbours coincide with the query point
            mask = dist == 0
            w = rho[mask]
            if w.sum() <= 0:
                raise SingularDesign("zero total weight at a degenerate query point")
            out[i] = float((y[mask] * w).sum() / w.sum())
            continue
        w = tricube(dist / lam) * rho
        active = w > 0
        n_active = int(active.sum())
        if n_active == 0 and fallback_unweighted:
            w = tricube(dist / lam)
            active = w > 0
            n_active = int(active.sum())
        if n_active == 0:
            raise SingularDesign(f"zero total weight in the neighbourhood of x={q}")
        # degrade to the degree the weighted neighbourhood can support,
        # as the classical smoother does at window boundaries
        deg = min(degree, n_active - 1)
        xa = x[active] - q
        wa = np.sqrt(w[active])
        while deg > 0:
            design = np.column_stack([xa**d for d in range(deg + 1)]) * wa[:, None]
            beta, _, rank, _ = np.linalg.lstsq(design, y[active] * wa, rcond=None)
            if rank == deg + 1:
                break
            deg -= 1
        if deg == 0:
            out[i] = float((w[active] * y[active]).sum() / w[active].sum())
        else:
            out[i] = beta[0]
    return out


def _loess_series(y: np.ndarray, weights: np.ndarray | None, span: int, degree: int, jump: int) -> np.ndarray:
    """LOESS over an evenly indexed series, evaluating every jump-th point
    and interpolating linearly in between."""
    n = y.size
    x = np.arange(n, dtype=float)
    if jump <= 1 or n <= 2:
        return loess_smooth(x, y, weights, x, degree, span, fallback_unweighted=True)
    anchors = np.arange(0, n, jump)
    if anchors[-1] != n - 1:
        anchors = np.append(anchors, n - 1)
    fitted = loess_smooth(x, y, weights, anchors.astype(float), degree, span, fallback_unweighted=True)
    return np.interp(x, anchors.astype(float), fitted)


def _moving_average(y: np.ndarray, window: int) -> np.ndarray:
    kernel = np.full(window, 1.0 / window)
    return np.convolve(y, kernel, mode="valid")


def _next_odd(value: float) -> int:
    k = int(np.ceil(value))
    return k if k % 2 == 1 else k + 1


@dataclass(frozen=True)
class StlParams:
    sp: int
    seasonal_window: int = 7
    trend_window: int | None = None
    seasonal_deg: int = 1
    trend_deg: int = 1
    seasonal_jump: int = 1
    trend_jump: int = 1
    robust: bool = False

    def __post_init__(self) -> None:
        if self.seasonal_window < 7 or self.seasonal_window % 2 == 0:
            raise ValueError("seasonal_window must be an odd integer >= 7")
        if self.trend_window is not None and (self.trend_window < 3 or self.trend_window % 2 == 0):
            raise ValueError("trend_window must be an odd integer >= 3")
        if self.seasonal_deg not in (0, 1, 2) or self.trend_deg not in (0, 1, 2):
            raise ValueError("degrees must be in {0, 1, 2}")
        if self.seasonal_jump not in (1, 2, 3) or self.trend_jump not in (1, 2, 3):
            raise ValueError("jumps must be in {1, 2, 3}")

    def resolved_trend_window(self) -> int:
        if self.trend_window is not None:
            return self.trend_window
        return _next_odd(1.5 * self.sp / (1.0 - 1.5 / self.seasonal_window))


def stl_decompose(values: np.ndarray, params: StlParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split a series into (trend, seasonal, residual) components."""
    y = np.asarray(values, dtype=float)
    m = params.sp
    if m < 2:
        raise PeriodTooSmall(f"stl needs a seasonal period >= 2, got {m}")
    if y.size < 2 * m:
        raise SeriesTooShort(f"stl needs at least two full cycles ({2 * m}), got {y.size}")

    n = y.size
    n_l = _next_odd(m)
    n_t = params.resolved_trend_window()
    rho = np.ones(n)
    trend = np.zeros(n)
    seasonal = np.zeros(n)
    outer_passes = 2 if params.robust else 0

    for outer in range(outer_passes + 1):
        for _ in range(2):  # inner loop
            detrended = y - trend
            cycle = np.empty(n + 2 * m)
            for k in range(m):
                sub = detrended[k::m]
                sub_rho = rho[k::m]
                pos = np.arange(sub.size, dtype=float)
                at = np.concatenate(([-1.0], pos, [float(sub.size)]))
                if params.seasonal_jump > 1 and sub.size > 2:
                    anchors = np.arange(0, sub.size, params.seasonal_jump)
                    if anchors[-1] != sub.size - 1:
                        anchors = np.append(anchors, sub.size - 1)
                    at_j = np.concatenate(([-1.0], anchors.astype(float), [float(sub.size)]))
                    fit_j = loess_smooth(pos, sub, sub_rho, at_j, params.seasonal_deg, params.seasonal_window, fallback_unweighted=True)
                    fitted = np.interp(at, at_j, fit_j)
                else:
                    fitted = loess_smooth(pos, sub, sub_rho, at, params.seasonal_deg, params.seasonal_window, fallback_unweighted=True)
                cycle[k::m] = fitted
            low = _moving_average(_moving_average(_moving_average(cycle, m), m), 3)
            low = _loess_series(low, None, n_l, 1, 1)
            seasonal = cycle[m : m + n] - low
            trend = _loess_series(y - seasonal, rho, n_t, params.trend_deg, params.trend_jump)
        if outer < outer_passes:
            resid = y - trend - seasonal
            h = 6.0 * np.median(np.abs(resid))
            if h <= 0:
                rho = np.ones(n)
            else:
                u = np.abs(resid) / h
                rho = np.clip(1.0 - u**2, 0.0, None) ** 2

    residual = y - trend - seasonal
    return trend, seasonal, residual


class StlModel(FittedModel):
    def __init__(self, spec: ForecasterSpec, n: int, params: StlParams, trend, seasonal, residual):
        super().__init__(spec, n)
        self.params = params
        self.trend = trend
        self.seasonal = seasonal
        self.residual = residual

    def _point_forecast(self, h: int) -> np.ndarray:
        m = self.params.sp
        n = self.train_length
        # trend: straight line through the last season of trend points
        tail = self.trend[-m:]
        t = np.arange(n - m, n, dtype=float)
        slope, intercept = np.polyfit(t, tail, 1)
        future = np.arange(n, n + h, dtype=float)
        trend_fc = intercept + slope * future
        # seasonal: cyclic repetition of the final cycle; residual: zero
        seas_fc = self.seasonal[n - m + (np.arange(h) % m)]
        return trend_fc + seas_fc


def _params_from_spec(spec: ForecasterSpec) -> StlParams:
    p = spec.params
    sp = int(p.get("sp", 1) or 1)
    return StlParams(
        sp=sp,
        seasonal_window=int(p.get("seasonal_window", 7)),
        trend_window=p.get("trend_window"),
        seasonal_deg=int(p.get("seasonal_deg", 1)),
        trend_deg=int(p.get("trend_deg", 1)),
        seasonal_jump=int(p.get("seasonal_jump", 1)),
        trend_jump=int(p.get("trend_jump", 1)),
        robust=bool(p.get("robust", False)),
    )


def fit_stl(spec: ForecasterSpec, train: TimeSeries | np.ndarray) -> StlModel:
    sp = int(spec.params.get("sp", 1) or 1)
    if sp < 2:
        raise PeriodTooSmall(f"stl needs a seasonal period >= 2, got {sp}")
    params = _params_from_spec(spec)
    y = as_train_values(train, 2 * sp, "stl")
    trend, seasonal, residual = stl_decompose(y, params)
    return StlModel(spec, y.size, params, trend, seasonal, residual)
