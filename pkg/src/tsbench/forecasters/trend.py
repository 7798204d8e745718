"""Trend and polynomial-trend forecasters.

Values are regressed on their integer indices (optionally expanded to
polynomial features) and the fitted curve is extrapolated past the end of
the training window. Regressors: ordinary least squares, ridge (penalty on
non-intercept coefficients), and a deterministic regression-tree stub that
stands in for the ensemble/tree options of the tuning grid.
"""

from __future__ import annotations

import numpy as np

from tsbench.core import TimeSeries
from tsbench.errors import SeriesTooShort, SingularDesign
from tsbench.forecasters.base import FittedModel, ForecasterSpec, as_train_values

REGRESSORS = ("ols", "ridge", "tree")


def _poly_features(idx: np.ndarray, degree: int, scale: float) -> np.ndarray:
    # indices scaled by the train length to keep the design well conditioned
    u = idx / scale
    return np.column_stack([u**d for d in range(degree + 1)])


def _linear_fit(X: np.ndarray, y: np.ndarray, ridge_lambda: float | None) -> np.ndarray:
    if ridge_lambda is None:
        beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
        if rank < X.shape[1]:
            raise SingularDesign(f"design rank {rank} < {X.shape[1]}")
        return beta
    penalty = ridge_lambda * np.eye(X.shape[1])
    penalty[0, 0] = 0.0  # intercept is never penalized
    try:
        return np.linalg.solve(X.T @ X + penalty, X.T @ y)
    except np.linalg.LinAlgError as exc:
        raise SingularDesign(str(exc)) from None


class _TreeStub:
    """Deterministic piecewise-constant regressor on a single feature.

    Greedy SSE-minimizing binary splits; queries beyond the training range
    take the value of the boundary leaf.
    """

    def __init__(self, max_depth: int = 3, min_leaf: int = 2):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.boundaries: list[float] = []
        self.leaf_values: list[float] = []

    def fit(self, x: np.ndarray, y: np.ndarray) -> "_TreeStub":
        segments = [(0, x.size)]
        for _ in range(self.max_depth):
            next_segments = []
            for lo, hi in segments:
                split = self._best_split(y, lo, hi)
                if split is None:
                    next_segments.append((lo, hi))
                else:
                    next_segments.extend([(lo, split), (split, hi)])
            segments = sorted(next_segments)
        self.boundaries = [float(x[lo]) for lo, _ in segments[1:]]
        self.leaf_values = [float(y[lo:hi].mean()) for lo, hi in segments]
        return self

    def _best_split(self, y: np.ndarray, lo: int, hi: int) -> int | None:
        if hi - lo < 2 * self.min_leaf:
            return None
        seg = y[lo:hi]
        total = ((seg - seg.mean()) ** 2).sum()
        best, best_sse = None, total - 1e-12
        for cut in range(self.min_leaf, hi - lo - self.min_leaf + 1):
            left, right = seg[:cut], seg[cut:]
            sse = ((left - left.mean()) ** 2).sum() + ((right - right.mean()) ** 2).sum()
            if sse < best_sse:
                best, best_sse = lo + cut, sse
        return best

    def predict(self, x: np.ndarray) -> np.ndarray:
        bins = np.searchsorted(self.boundaries, x, side="right")
        return np.asarray(self.leaf_values, dtype=float)[bins]


class TrendModel(FittedModel):
    def __init__(self, spec: ForecasterSpec, n: int, degree: int, regressor: str, state):
        super().__init__(spec, n)
        self.degree = degree
        self.regressor = regressor
        self._state = state

    def _point_forecast(self, h: int) -> np.ndarray:
        idx = np.arange(self.train_length + 1, self.train_length + h + 1, dtype=float)
        if self.regressor == "tree":
            return self._state.predict(idx)
        beta = self._state
        return _poly_features(idx, self.degree, float(self.train_length)) @ beta


def _fit_trend_family(spec: ForecasterSpec, train, degree: int) -> TrendModel:
    regressor = spec.params.get("regressor", "ols")
    if regressor not in REGRESSORS:
        raise ValueError(f"regressor must be one of {REGRESSORS}, got {regressor!r}")
    values = as_train_values(train, max(2, degree + 1), "trend")
    if values.size <= degree:
        raise SeriesTooShort(f"polynomial degree {degree} needs more than {degree} points")
    idx = np.arange(1, values.size + 1, dtype=float)
    if regressor == "tree":
        state = _TreeStub().fit(idx, values)
    else:
        lam = float(spec.params.get("ridge_lambda", 1.0)) if regressor == "ridge" else None
        X = _poly_features(idx, degree, float(values.size))
        state = _linear_fit(X, values, lam)
    return TrendModel(spec, values.size, degree, regressor, state)


def fit_trend(spec: ForecasterSpec, train: TimeSeries | np.ndarray) -> TrendModel:
    return _fit_trend_family(spec, train, degree=1)


def fit_poly_trend(spec: ForecasterSpec, train: TimeSeries | np.ndarray) -> TrendModel:
    degree = int(spec.params.get("degree", 2))
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree}")
    return _fit_trend_family(spec, train, degree=degree)
