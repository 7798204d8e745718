"""Point-forecast accuracy metrics and per-dataset aggregation."""

from __future__ import annotations

import numpy as np

from tsbench.errors import EmptyInput, InvalidQuantile, LengthMismatch, ZeroDenominator

#: canonical metric identifiers; quantile loss uses "ql@<q>" (e.g. "ql@0.9")
KNOWN_METRICS = ("smape", "mase", "rmse")


def _paired(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.shape != p.shape:
        raise LengthMismatch(f"actual has shape {a.shape}, predicted {p.shape}")
    if a.size == 0:
        raise EmptyInput("metrics need at least one point")
    return a.ravel(), p.ravel()


def smape(actual, predicted) -> float:
    """Symmetric MAPE in [0, 2]: (2/n) sum |a-p| / (|a|+|p|).

    Terms where both values are zero contribute 0 (intermittent series
    produce exactly-zero actuals and forecasts).
    """
    a, p = _paired(actual, predicted)
    denom = np.abs(a) + np.abs(p)
    terms = np.zeros_like(a)
    nz = denom > 0
    terms[nz] = np.abs(a[nz] - p[nz]) / denom[nz]
    return float(2.0 * terms.mean())


def mase(actual, predicted, train, m: int = 1) -> float:
    """Mean absolute scaled error against the in-sample lag-m naive.

    The denominator D = mean |train_i - train_{i-m}| is used as-is, with no
    clamping; D == 0 raises ZeroDenominator.
    """
    a, p = _paired(actual, predicted)
    t = np.asarray(train, dtype=float).ravel()
    m = int(m)
    if m < 1:
        raise ValueError(f"seasonal period m must be >= 1, got {m}")
    if t.size <= m:
        raise LengthMismatch(f"train has {t.size} points, needs more than m={m}")
    d = float(np.abs(t[m:] - t[:-m]).mean())
    if d == 0.0:
        raise ZeroDenominator(f"training series is constant at lag {m}")
    return float(np.abs(a - p).mean() / d)


def rmse(actual, predicted) -> float:
    a, p = _paired(actual, predicted)
    return float(np.sqrt(np.mean((a - p) ** 2)))


def quantile_loss(actual: float, predicted: float, q: float) -> float:
    """Pinball loss max(q*(y-yhat), (q-1)*(y-yhat)); nonnegative."""
    if not 0.0 < q < 1.0:
        raise InvalidQuantile(f"q must be in (0, 1), got {q}")
    diff = float(actual) - float(predicted)
    return max(q * diff, (q - 1.0) * diff)


def mean_quantile_loss(actual, predicted, q: float) -> float:
    """Mean pinball loss over a forecast window."""
    a, p = _paired(actual, predicted)
    if not 0.0 < q < 1.0:
        raise InvalidQuantile(f"q must be in (0, 1), got {q}")
    diff = a - p
    return float(np.maximum(q * diff, (q - 1.0) * diff).mean())


def aggregate(per_series_scores) -> float:
    """Dataset score: unweighted mean of the per-series scores."""
    scores = np.asarray(list(per_series_scores), dtype=float)
    if scores.size == 0:
        raise EmptyInput("no per-series scores to aggregate")
    return float(scores.mean())


def parse_metric(metric_id: str) -> tuple[str, float | None]:
    """Validate a metric identifier; returns (kind, q)."""
    mid = metric_id.strip().lower()
    if mid in KNOWN_METRICS:
        return mid, None
    if mid.startswith("ql@"):
        try:
            q = float(mid[3:])
        except ValueError:
            raise InvalidQuantile(f"bad quantile in metric id {metric_id!r}") from None
        if not 0.0 < q < 1.0:
            raise InvalidQuantile(f"q must be in (0, 1), got {q}")
        return "ql", q
    raise ValueError(f"unknown metric {metric_id!r}")


def score(metric_id: str, actual, predicted, train=None, m: int = 1) -> float:
    """Dispatch a metric identifier to its implementation."""
    kind, q = parse_metric(metric_id)
    if kind == "smape":
        return smape(actual, predicted)
    if kind == "rmse":
        return rmse(actual, predicted)
    if kind == "mase":
        if train is None:
            raise ValueError("mase requires the training series")
        return mase(actual, predicted, train, m=m)
    return mean_quantile_loss(actual, predicted, q)  # kind == "ql"
