"""ARIMA with automatic order selection.

The differencing degree d (at most 2) comes from a repeated KPSS
stationarity test. The (p, q) orders come from a stepwise neighbourhood
search over [0, 5]^2 seeded at {(0,0), (1,0), (0,1), (1,1), (2,2)}: each
candidate is estimated by conditional sum of squares and refined against
the exact Gaussian likelihood (Kalman filter), then scored by the chosen
information criterion. A constant (mean) term is included only for d = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tsbench.core import TimeSeries
from tsbench.errors import NonConvergence, SeriesTooShort
from tsbench.forecasters._optim import nelder_mead
from tsbench.forecasters.base import FittedModel, ForecasterSpec, as_train_values

MAX_P = 5
MAX_Q = 5
MAX_D = 2
KPSS_CRIT_5PCT = 0.463
_ICS = ("aic", "aicc", "bic")


@dataclass(frozen=True)
class ArimaOrder:
    """A fitted ARIMA(p, d, q) model summary."""

    p: int
    d: int
    q: int
    with_constant: bool
    phi_coeffs: tuple[float, ...] = ()
    theta_coeffs: tuple[float, ...] = ()
    sigma2: float = 1.0
    constant: float = 0.0


def kpss_statistic(values: np.ndarray) -> float:
    """KPSS level-stationarity statistic with a Bartlett long-run variance."""
    y = np.asarray(values, dtype=float)
    n = y.size
    e = y - y.mean()
    s = np.cumsum(e)
    gamma0 = float((e**2).mean())
    if gamma0 == 0.0:
        return 0.0
    lags = int(4 * (n / 100.0) ** 0.25)
    lags = min(lags, n - 1)
    lrv = gamma0
    for lag in range(1, lags + 1):
        w = 1.0 - lag / (lags + 1.0)
        lrv += 2.0 * w * float((e[lag:] * e[:-lag]).mean() * (n - lag) / n)
    if lrv <= 0:
        lrv = gamma0
    return float((s**2).sum() / (n**2 * lrv))


def ndiffs(values: np.ndarray, max_d: int = MAX_D) -> int:
    """Differencing degree: difference while the KPSS test rejects."""
    y = np.asarray(values, dtype=float)
    d = 0
    while d < max_d and y.size >= 10 and kpss_statistic(y) > KPSS_CRIT_5PCT:
        y = np.diff(y)
        d += 1
    return d


def _css_residuals(w: np.ndarray, mean: float, phi: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Conditional-sum-of-squares residuals (zeros in the burn-in)."""
    n = w.size
    p, q = phi.size, theta.size
    z = w - mean
    e = np.zeros(n)
    for t in range(p, n):
        acc = z[t]
        for i in range(p):
            acc -= phi[i] * z[t - 1 - i]
        for j in range(min(q, t)):
            acc -= theta[j] * e[t - 1 - j]
        e[t] = acc
    return e


def _poly_roots_inside(coeffs: np.ndarray) -> bool:
    """True when 1 - c1 z - ... - ck z^k has any root inside the unit disk."""
    if coeffs.size == 0:
        return False
    poly = np.concatenate(([1.0], -coeffs))  # ascending powers
    roots = np.roots(poly[::-1])
    return bool(np.any(np.abs(roots) < 1.0 + 1e-6))


def _solve_initial_cov(T: np.ndarray, RRt: np.ndarray) -> np.ndarray:
    r = T.shape[0]
    eye = np.eye(r * r)
    vec = np.linalg.solve(eye - np.kron(T, T), RRt.ravel(order="F"))
    return vec.reshape((r, r), order="F")


def _kalman_loglik(w: np.ndarray, mean: float, phi: np.ndarray, theta: np.ndarray) -> tuple[float, float]:
    """Exact Gaussian log-likelihood with sigma^2 concentrated out.

    Returns (loglik, sigma2_hat). Uses the Harvey state-space form of an
    ARMA(p, q) with state dimension max(p, q + 1).
    """
    z = w - mean
    n = z.size
    p, q = phi.size, theta.size
    r = max(p, q + 1)
    T = np.zeros((r, r))
    T[: p, 0] = phi
    if r > 1:
        T[: r - 1, 1:] = np.eye(r - 1)
    R = np.zeros(r)
    R[0] = 1.0
    R[1 : q + 1] = theta
    RRt = np.outer(R, R)
    try:
        P = _solve_initial_cov(T, RRt)
    except np.linalg.LinAlgError:
        return -math.inf, math.nan
    a = np.zeros(r)
    ssq = 0.0
    logf = 0.0
    for t in range(n):
        f = P[0, 0]
        if not math.isfinite(f) or f <= 1e-12:
            return -math.inf, math.nan
        v = z[t] - a[0]
        ssq += v * v / f
        logf += math.log(f)
        k = P[:, 0] / f
        a = T @ (a + k * v)
        P = T @ (P - np.outer(k, P[0, :])) @ T.T + RRt
    sigma2 = ssq / n
    if sigma2 <= 0:
        return -math.inf, math.nan
    loglik = -0.5 * (n * math.log(2 * math.pi * sigma2) + n + logf)
    return loglik, sigma2


@dataclass
class _ArmaFit:
    mean: float
    phi: np.ndarray
    theta: np.ndarray
    sigma2: float
    loglik: float
    n_obs: int

    def n_params(self, with_constant: bool) -> int:
        return self.phi.size + self.theta.size + (1 if with_constant else 0) + 1

    def ic(self, kind: str, with_constant: bool) -> float:
        k = self.n_params(with_constant)
        n = self.n_obs
        base = -2.0 * self.loglik
        if kind == "aic":
            return base + 2.0 * k
        if kind == "bic":
            return base + k * math.log(n)
        if n - k - 1 <= 0:
            return math.inf
        return base + 2.0 * k * n / (n - k - 1)  # aicc


def _hannan_rissanen_start(w: np.ndarray, p: int, q: int, mean: float) -> np.ndarray:
    """Rough AR start values via least squares on lags; MA terms start at 0."""
    z = w - mean
    start = np.zeros(p + q)
    if p > 0 and z.size > p + 1:
        X = np.column_stack([z[p - 1 - i : z.size - 1 - i] for i in range(p)])
        target = z[p:]
        beta, _, _, _ = np.linalg.lstsq(X, target, rcond=None)
        beta = np.clip(beta, -0.95, 0.95)
        start[:p] = beta
    return start


def _fit_arma(w: np.ndarray, p: int, q: int, with_constant: bool) -> _ArmaFit:
    n = w.size
    if n <= p + q + (1 if with_constant else 0) + 1:
        raise NonConvergence(f"series too short for ARMA({p},{q})")
    mean0 = float(w.mean()) if with_constant else 0.0
    coef0 = _hannan_rissanen_start(w, p, q, mean0)
    scale = max(float(np.abs(w - mean0).mean()), 1e-8)

    def split(x: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        i = 0
        mean = mean0
        if with_constant:
            mean = float(x[0])
            i = 1
        phi = np.asarray(x[i : i + p], dtype=float)
        theta = np.asarray(x[i + p : i + p + q], dtype=float)
        return mean, phi, theta

    def css_loss(x: np.ndarray) -> float:
        mean, phi, theta = split(x)
        if _poly_roots_inside(phi) or _poly_roots_inside(theta):
            return math.inf
        e = _css_residuals(w, mean, phi, theta)
        sse = float((e[p:] ** 2).sum()) if n > p else float((e**2).sum())
        return sse if math.isfinite(sse) else math.inf

    def nll(x: np.ndarray) -> float:
        mean, phi, theta = split(x)
        if _poly_roots_inside(phi) or _poly_roots_inside(theta):
            return math.inf
        ll, _ = _kalman_loglik(w, mean, phi, theta)
        return -ll

    x0 = (np.concatenate(([mean0], coef0)) if with_constant else coef0).astype(float)
    steps = ([0.1 * scale] if with_constant else []) + [0.1] * (p + q)
    if x0.size:
        x_css, f_css = nelder_mead(css_loss, x0, step=steps, tol=1e-8, max_evals=500)
        if not math.isfinite(f_css):
            raise NonConvergence(f"CSS estimation failed for ARMA({p},{q})")
        x_ml, f_ml = nelder_mead(nll, x_css, step=[s * 0.1 for s in steps], tol=1e-8, max_evals=500)
        if not math.isfinite(f_ml):
            x_ml = x_css
    else:
        x_ml = x0
    mean, phi, theta = split(x_ml)
    loglik, sigma2 = _kalman_loglik(w, mean, phi, theta)
    if not math.isfinite(loglik):
        raise NonConvergence(f"likelihood evaluation failed for ARMA({p},{q})")
    return _ArmaFit(mean=mean, phi=phi, theta=theta, sigma2=sigma2, loglik=loglik, n_obs=n)


class ArimaModel(FittedModel):
    def __init__(self, spec, train: np.ndarray, order: ArimaOrder, fit: _ArmaFit, w: np.ndarray):
        super().__init__(spec, train.size)
        self.order = order
        self._fit = fit
        self._w = w
        self._train = train
        #: every (p, q, ic) evaluated during the search, for auditability
        self.search_trace: list[tuple[int, int, float]] = []

    def _point_forecast(self, h: int) -> np.ndarray:
        fit = self._fit
        p, q = fit.phi.size, fit.theta.size
        z = (self._w - fit.mean).tolist()
        e = _css_residuals(self._w, fit.mean, fit.phi, fit.theta).tolist()
        for _ in range(h):
            t = len(z)
            acc = 0.0
            for i in range(p):
                acc += fit.phi[i] * z[t - 1 - i]
            for j in range(q):
                idx = t - 1 - j
                if idx < len(e):
                    acc += fit.theta[j] * e[idx]
            z.append(acc)
        w_fc = np.asarray(z[-h:]) + fit.mean
        # undo the differencing, one integration level at a time
        d = self.order.d
        tails = []
        level = self._train
        for _ in range(d):
            tails.append(level[-1])
            level = np.diff(level)
        fc = w_fc
        for last in reversed(tails):
            fc = last + np.cumsum(fc)
        return fc


def fit_arima(
    spec: ForecasterSpec,
    train: TimeSeries | np.ndarray,
    *,
    order: tuple[int, int, int] | None = None,
    with_constant: bool | None = None,
) -> ArimaModel:
    """Fit a single ARIMA model with a fixed (p, d, q)."""
    values = as_train_values(train, 3, "arima")
    p_, d_, q_ = order if order is not None else (
        int(spec.params.get("p", 0)), int(spec.params.get("d", 0)), int(spec.params.get("q", 0))
    )
    if not (0 <= p_ <= MAX_P and 0 <= d_ <= MAX_D and 0 <= q_ <= MAX_Q):
        raise ValueError(f"order ({p_},{d_},{q_}) outside p<={MAX_P}, d<={MAX_D}, q<={MAX_Q}")
    if with_constant is None:
        with_constant = bool(spec.params.get("with_constant", d_ == 0))
    w = values.copy()
    for _ in range(d_):
        w = np.diff(w)
    if w.size < 3:
        raise SeriesTooShort(f"series too short after differencing {d_} times")
    fit = _fit_arma(w, p_, q_, with_constant)
    order_out = _order_summary(p_, d_, q_, with_constant, fit)
    return ArimaModel(spec, values, order_out, fit, w)


def _order_summary(p: int, d: int, q: int, with_constant: bool, fit: _ArmaFit) -> ArimaOrder:
    constant = fit.mean * (1.0 - fit.phi.sum()) if with_constant else 0.0
    return ArimaOrder(
        p=p, d=d, q=q, with_constant=with_constant,
        phi_coeffs=tuple(float(v) for v in fit.phi),
        theta_coeffs=tuple(float(v) for v in fit.theta),
        sigma2=float(fit.sigma2), constant=float(constant),
    )


_START_ORDERS = ((0, 0), (1, 0), (0, 1), (1, 1), (2, 2))


def fit_auto_arima(spec: ForecasterSpec, train: TimeSeries | np.ndarray) -> ArimaModel:
    """Stepwise automatic ARIMA; IC defaults to AICc."""
    ic = str(spec.params.get("ic", "aicc")).lower()
    if ic not in _ICS:
        raise ValueError(f"ic must be one of {_ICS}, got {ic!r}")
    values = as_train_values(train, 10, "auto_arima")
    d = int(spec.params.get("d", -1))
    if d < 0:
        d = ndiffs(values)
    with_constant = bool(spec.params.get("with_constant", d == 0))
    w = values.copy()
    for _ in range(d):
        w = np.diff(w)

    cache: dict[tuple[int, int], tuple[float, _ArmaFit] | None] = {}
    trace: list[tuple[int, int, float]] = []

    def evaluate(p: int, q: int) -> tuple[float, _ArmaFit] | None:
        key = (p, q)
        if key in cache:
            return cache[key]
        try:
            fit = _fit_arma(w, p, q, with_constant)
            result = (fit.ic(ic, with_constant), fit)
            trace.append((p, q, result[0]))
        except NonConvergence:
            result = None
        cache[key] = result
        return result

    def better(candidate: tuple[int, int, float], incumbent: tuple[int, int, float]) -> bool:
        cp, cq, cic = candidate
        ip, iq, iic = incumbent
        if cic != iic:
            return cic < iic
        return (cp + cq, cp) < (ip + iq, ip)  # tie-break: simpler first

    best: tuple[int, int, float] | None = None
    for p0, q0 in _START_ORDERS:
        res = evaluate(p0, q0)
        if res is None:
            continue
        cand = (p0, q0, res[0])
        if best is None or better(cand, best):
            best = cand
    if best is None:
        raise NonConvergence("no ARIMA start candidate could be estimated")

    improved = True
    while improved:
        improved = False
        p0, q0, _ = best
        for dp, dq in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            p1, q1 = p0 + dp, q0 + dq
            if not (0 <= p1 <= MAX_P and 0 <= q1 <= MAX_Q):
                continue
            res = evaluate(p1, q1)
            if res is None:
                continue
            cand = (p1, q1, res[0])
            if better(cand, best):
                best = cand
                improved = True

    p_best, q_best, _ = best
    ic_best, fit = cache[(p_best, q_best)]  # type: ignore[misc]
    model = ArimaModel(spec, values, _order_summary(p_best, d, q_best, with_constant, fit), fit, w)
    model.search_trace = trace
    return model
