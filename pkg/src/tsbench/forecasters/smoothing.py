"""Exponential smoothing: SES, Holt (damped), Holt-Winters, and auto-ETS.

One recursion drives the whole family. Component switches follow the usual
(error, trend, seasonal) taxonomy; the additive- and multiplicative-error
variants share the same observed-data state path and differ only in the
likelihood used for estimation and model selection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tsbench.core import TimeSeries
from tsbench.errors import NonConvergence, NonPositiveData
from tsbench.forecasters._optim import golden_section, nelder_mead
from tsbench.forecasters.base import FittedModel, ForecasterSpec, as_train_values

PARAM_LO, PARAM_HI = 1e-4, 0.9999
PHI_LO, PHI_HI = 0.8, 0.998

_TREND_MODES = (None, "add", "mul")
_SEASONAL_MODES = (None, "add", "mul")
_INITS = ("heuristic", "legacy_heuristic", "estimated")


@dataclass(frozen=True)
class SmoothingConfig:
    trend: str | None = None
    seasonal: str | None = None
    damped: bool = False
    sp: int = 1

    def __post_init__(self) -> None:
        if self.trend not in _TREND_MODES:
            raise ValueError(f"trend must be one of {_TREND_MODES}, got {self.trend!r}")
        if self.seasonal not in _SEASONAL_MODES:
            raise ValueError(f"seasonal must be one of {_SEASONAL_MODES}, got {self.seasonal!r}")
        if self.seasonal is not None and self.sp < 2:
            raise ValueError("seasonal smoothing requires sp >= 2")


def _initial_level_slope(y: np.ndarray, method: str, trend: str | None) -> tuple[float, float]:
    k = min(10, y.size)
    if method == "legacy_heuristic":
        l0 = float(y[0])
        slope = float(y[1] - y[0]) if (trend is not None and y.size > 1) else 0.0
    else:  # heuristic is also the starting point for "estimated"
        head = y[:k]
        l0 = float(head.mean())
        if trend is not None and k > 1:
            t = np.arange(k, dtype=float)
            slope = float(np.polyfit(t, head, 1)[0])
        else:
            slope = 0.0
    if trend == "mul":
        b0 = 1.0 + slope / l0 if l0 != 0 else 1.0
        b0 = max(b0, 1e-6)
        return l0, b0
    return l0, slope


def _initial_seasonals(y: np.ndarray, sp: int, seasonal: str) -> np.ndarray:
    """Classical-decomposition seasonal starting values (normalized)."""
    neutral = 0.0 if seasonal == "add" else 1.0
    if sp < 2 or y.size < 2 * sp:
        return np.full(sp, neutral)
    trend = _centered_ma(y, sp)
    valid = ~np.isnan(trend)
    if seasonal == "mul" and np.any(trend[valid] == 0):
        return np.full(sp, neutral)
    detr = np.where(valid, y - trend if seasonal == "add" else np.divide(y, np.where(valid, trend, 1.0)), np.nan)
    seas = np.empty(sp)
    for k in range(sp):
        vals = detr[k::sp]
        vals = vals[~np.isnan(vals)]
        seas[k] = vals.mean() if vals.size else neutral
    if seasonal == "add":
        seas -= seas.mean()
    else:
        mean = seas.mean()
        seas = seas / mean if mean != 0 else np.full(sp, 1.0)
    return seas


def _centered_ma(y: np.ndarray, m: int) -> np.ndarray:
    """Centered moving average of window m; NaN at the ends."""
    n = y.size
    out = np.full(n, np.nan)
    if m % 2 == 1:
        half = m // 2
        if n >= m:
            kernel = np.full(m, 1.0 / m)
            out[half : n - half] = np.convolve(y, kernel, mode="valid")
    else:
        half = m // 2
        if n >= m + 1:
            kernel = np.full(m + 1, 1.0 / m)
            kernel[0] = kernel[-1] = 0.5 / m
            out[half : n - half] = np.convolve(y, kernel, mode="valid")
    return out


def _run_filter(
    y: np.ndarray,
    cfg: SmoothingConfig,
    alpha: float,
    beta: float,
    gamma: float,
    phi: float,
    l0: float,
    b0: float,
    s0: np.ndarray,
) -> tuple[np.ndarray, float, float, np.ndarray] | None:
    """One pass of the smoothing recursion.

    Returns (one-step fitted values, final level, final trend, final
    seasonal cycle) or None when the recursion leaves the finite range.
    """
    n = y.size
    m = cfg.sp if cfg.seasonal else 1
    seas = s0.copy() if cfg.seasonal else np.zeros(1)
    level, trend = l0, b0
    mu = np.empty(n)
    add_seas = cfg.seasonal == "add"
    mul_trend = cfg.trend == "mul"
    has_trend = cfg.trend is not None
    for t in range(n):
        if has_trend:
            base = level * trend**phi if mul_trend else level + phi * trend
        else:
            base = level
        if cfg.seasonal:
            m_t = base + seas[t % m] if add_seas else base * seas[t % m]
        else:
            m_t = base
        mu[t] = m_t
        if not math.isfinite(m_t) or abs(m_t) > 1e150:
            return None
        obs = y[t]
        if cfg.seasonal:
            deseason = obs - seas[t % m] if add_seas else (obs / seas[t % m] if seas[t % m] != 0 else obs)
        else:
            deseason = obs
        new_level = alpha * deseason + (1 - alpha) * base
        if has_trend:
            if mul_trend:
                ratio = new_level / level if level != 0 else 1.0
                trend = beta * ratio + (1 - beta) * trend**phi
            else:
                trend = beta * (new_level - level) + (1 - beta) * phi * trend
        if cfg.seasonal:
            if add_seas:
                seas[t % m] = gamma * (obs - base) + (1 - gamma) * seas[t % m]
            else:
                seas[t % m] = gamma * (obs / base if base != 0 else 1.0) + (1 - gamma) * seas[t % m]
        level = new_level
        if not math.isfinite(level) or abs(level) > 1e150:
            return None
    return mu, level, trend, seas


def _forecast_from_state(
    cfg: SmoothingConfig, phi: float, level: float, trend: float, seas: np.ndarray, n: int, h: int
) -> np.ndarray:
    out = np.empty(h)
    damp = 0.0  # sum of phi^i for i <= j; phi is 1 when undamped, so this is j
    for j in range(1, h + 1):
        damp += phi**j
        if cfg.trend == "mul":
            base = level * trend**damp
        elif cfg.trend == "add":
            base = level + damp * trend
        else:
            base = level
        if cfg.seasonal:
            s = seas[(n + j - 1) % cfg.sp]
            out[j - 1] = base + s if cfg.seasonal == "add" else base * s
        else:
            out[j - 1] = base
    return out


@dataclass
class _FitResult:
    alpha: float
    beta: float
    gamma: float
    phi: float
    l0: float
    b0: float
    s0: np.ndarray
    mu: np.ndarray
    level: float
    trend: float
    seas: np.ndarray
    sse: float


def _estimate(
    y: np.ndarray,
    cfg: SmoothingConfig,
    *,
    alpha: float | None,
    beta: float | None,
    gamma: float | None,
    phi: float | None,
    initialization: str,
    objective: str = "sse",
) -> _FitResult:
    """Estimate free parameters by minimizing one-step SSE or -2 logLik."""
    l0_init, b0_init = _initial_level_slope(y, initialization, cfg.trend)
    s0 = _initial_seasonals(y, cfg.sp, cfg.seasonal) if cfg.seasonal else np.zeros(1)
    scale = max(float(np.abs(y).mean()), 1e-8)

    free: list[str] = []
    x0: list[float] = []
    bounds: list[tuple[float, float] | None] = []
    steps: list[float] = []
    if alpha is None:
        free.append("alpha"); x0.append(0.5); bounds.append((PARAM_LO, PARAM_HI)); steps.append(0.2)
    if cfg.trend is not None and beta is None:
        free.append("beta"); x0.append(0.1); bounds.append((PARAM_LO, PARAM_HI)); steps.append(0.1)
    if cfg.seasonal is not None and gamma is None:
        free.append("gamma"); x0.append(0.1); bounds.append((PARAM_LO, PARAM_HI)); steps.append(0.1)
    if cfg.damped and phi is None:
        free.append("phi"); x0.append(0.95); bounds.append((PHI_LO, PHI_HI)); steps.append(0.02)
    if initialization == "estimated":
        free.append("l0"); x0.append(l0_init); bounds.append(None); steps.append(0.5 * scale or 0.5)
        if cfg.trend == "add":
            free.append("b0"); x0.append(b0_init); bounds.append(None); steps.append(0.1 * scale or 0.1)
        elif cfg.trend == "mul":
            free.append("b0"); x0.append(b0_init); bounds.append((1e-6, 10.0)); steps.append(0.05)

    fixed = {
        "alpha": 0.5 if alpha is None else float(alpha),
        "beta": 0.1 if beta is None else float(beta),
        "gamma": 0.1 if gamma is None else float(gamma),
        "phi": (0.95 if phi is None else float(phi)) if cfg.damped else 1.0,
        "l0": l0_init,
        "b0": b0_init,
    }

    def unpack(x: np.ndarray) -> dict[str, float]:
        params = dict(fixed)
        for name, val in zip(free, x):
            params[name] = float(val)
        return params

    def loss(x: np.ndarray) -> float:
        p = unpack(x)
        run = _run_filter(y, cfg, p["alpha"], p["beta"], p["gamma"], p["phi"], p["l0"], p["b0"], s0)
        if run is None:
            return math.inf
        mu = run[0]
        if objective == "sse":
            return float(((y - mu) ** 2).sum())
        # Gaussian -2 logLik; multiplicative error uses relative residuals
        n = y.size
        if objective == "mul_loglik":
            if np.any(mu <= 0):
                return math.inf
            resid = (y - mu) / mu
            sigma2 = float((resid**2).mean())
            if sigma2 <= 0:
                sigma2 = 1e-300
            return n * math.log(2 * math.pi * sigma2) + n + 2 * float(np.log(np.abs(mu)).sum())
        sigma2 = float(((y - mu) ** 2).mean())
        if sigma2 <= 0:
            sigma2 = 1e-300
        return n * math.log(2 * math.pi * sigma2) + n

    if free:
        x_best, f_best = nelder_mead(loss, np.asarray(x0), step=steps, bounds=bounds, tol=1e-6, max_evals=500)
        if not math.isfinite(f_best):
            raise NonConvergence(
                f"smoothing fit diverged (trend={cfg.trend}, seasonal={cfg.seasonal}, objective={objective})"
            )
        params = unpack(x_best)
    else:
        params = dict(fixed)
        if not math.isfinite(loss(np.zeros(0))):
            raise NonConvergence("smoothing recursion diverged with the supplied parameters")

    run = _run_filter(y, cfg, params["alpha"], params["beta"], params["gamma"], params["phi"], params["l0"], params["b0"], s0)
    if run is None:
        raise NonConvergence("smoothing recursion diverged at the fitted parameters")
    mu, level, trend, seas = run
    return _FitResult(
        alpha=params["alpha"], beta=params["beta"], gamma=params["gamma"], phi=params["phi"],
        l0=params["l0"], b0=params["b0"], s0=s0, mu=mu, level=level, trend=trend, seas=seas,
        sse=float(((y - mu) ** 2).sum()),
    )


def _ses_components(y: np.ndarray, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Affine decomposition of the SES level path in the initial level.

    With l_t = alpha*y_t + (1-alpha)*l_{t-1} and l_{-1} = l0, the one-step
    prediction mu_t = A_{t-1} + C_{t-1}*l0 where A carries the data part and
    C = (1-alpha)^(t+1). Lets l0 be solved in closed form per alpha.
    """
    n = y.size
    a = np.empty(n)
    prev = 0.0
    r = 1.0 - alpha
    for t in range(n):
        prev = alpha * y[t] + r * prev
        a[t] = prev
    c = np.power(r, np.arange(1, n + 1))
    return a, c


def _fit_ses(y: np.ndarray, alpha: float | None, initialization: str) -> _FitResult:
    """SES fit with the initial level profiled out of the SSE.

    For each candidate alpha the optimal l0 has a closed form, so only a
    univariate golden-section search over alpha remains.
    """

    def sse_parts(a: float) -> tuple[float, float]:
        comp_a, comp_c = _ses_components(y, a)
        mu_a = np.concatenate(([0.0], comp_a[:-1]))
        mu_c = np.concatenate(([1.0], comp_c[:-1]))
        if initialization == "estimated":
            denom = float((mu_c**2).sum())
            l0 = float((mu_c * (y - mu_a)).sum() / denom) if denom > 1e-300 else float(y[0])
        elif initialization == "legacy_heuristic":
            l0 = float(y[0])
        else:
            l0 = float(y[: min(10, y.size)].mean())
        resid = y - mu_a - mu_c * l0
        return float((resid**2).sum()), l0

    if alpha is None:
        best_alpha, _ = golden_section(lambda a: sse_parts(a)[0], PARAM_LO, PARAM_HI, tol=1e-6, max_evals=500)
    else:
        best_alpha = float(alpha)
    sse, l0 = sse_parts(best_alpha)
    comp_a, comp_c = _ses_components(y, best_alpha)
    mu = np.concatenate(([l0], comp_a[:-1] + comp_c[:-1] * l0))
    level = float(comp_a[-1] + comp_c[-1] * l0)
    return _FitResult(
        alpha=best_alpha, beta=0.0, gamma=0.0, phi=1.0, l0=l0, b0=0.0,
        s0=np.zeros(1), mu=mu, level=level, trend=0.0, seas=np.zeros(1), sse=sse,
    )


class SmoothingModel(FittedModel):
    def __init__(self, spec: ForecasterSpec, n: int, cfg: SmoothingConfig, fit: _FitResult):
        super().__init__(spec, n)
        self.config = cfg
        self.alpha = fit.alpha
        self.beta = fit.beta
        self.gamma = fit.gamma
        self.phi = fit.phi
        self.level = fit.level
        self.trend = fit.trend
        self.seasonals = fit.seas
        self.sse = fit.sse
        self.fitted = fit.mu

    def _point_forecast(self, h: int) -> np.ndarray:
        return _forecast_from_state(
            self.config, self.phi, self.level, self.trend, self.seasonals, self.train_length, h
        )


_MODE_ALIASES = {None: None, "none": None, "add": "add", "additive": "add", "mul": "mul", "multiplicative": "mul"}


def _component_mode(value, which: str) -> str | None:
    if value not in _MODE_ALIASES:
        raise ValueError(f"{which} must be none/additive/multiplicative, got {value!r}")
    return _MODE_ALIASES[value]


def fit_exp_smoothing(spec: ForecasterSpec, train: TimeSeries | np.ndarray) -> SmoothingModel:
    """Exponential smoothing with optional trend/damping/seasonality.

    Unset smoothing parameters are estimated by minimizing the in-sample
    sum of squared one-step errors.
    """
    p = spec.params
    trend = _component_mode(p.get("trend"), "trend")
    seasonal = _component_mode(p.get("seasonal"), "seasonal")
    sp = int(p.get("sp", 1) or 1)
    damped = bool(p.get("damped", p.get("damping_trend") is not None))
    initialization = str(p.get("initialization", "estimated")).replace("-", "_")
    if initialization not in _INITS:
        raise ValueError(f"initialization must be one of {_INITS}, got {initialization!r}")
    smoothing_params = {
        "alpha": p.get("alpha", p.get("smoothing_level")),
        "beta": p.get("beta", p.get("smoothing_trend")),
        "gamma": p.get("gamma", p.get("smoothing_seasonal")),
    }
    for key, value in smoothing_params.items():
        if value is not None and not 0.0 <= float(value) <= 1.0:
            raise ValueError(f"{key} must lie in [0, 1], got {value}")
    phi_given = p.get("phi", p.get("damping_trend"))
    if phi_given is not None and not 0.0 < float(phi_given) <= 1.0:
        raise ValueError(f"damping parameter must lie in (0, 1], got {phi_given}")
    cfg = SmoothingConfig(trend=trend, seasonal=seasonal, damped=damped, sp=sp if seasonal else max(sp, 1))

    min_len = 2 * sp if seasonal else (3 if trend else 2)
    y = as_train_values(train, min_len, "exp_smoothing")
    if (seasonal == "mul" or trend == "mul") and np.any(y <= 0):
        raise NonPositiveData("multiplicative smoothing requires strictly positive training values")

    alpha = p.get("alpha", p.get("smoothing_level"))
    if trend is None and seasonal is None:
        fit = _fit_ses(y, alpha, initialization)
    else:
        fit = _estimate(
            y, cfg,
            alpha=alpha,
            beta=p.get("beta", p.get("smoothing_trend")),
            gamma=p.get("gamma", p.get("smoothing_seasonal")),
            phi=p.get("phi", p.get("damping_trend")),
            initialization=initialization,
        )
    return SmoothingModel(spec, y.size, cfg, fit)


def fit_ses_alpha(y: np.ndarray, initialization: str = "estimated") -> SmoothingModel:
    """Plain SES with estimated alpha (helper for the theta forecaster)."""
    spec = ForecasterSpec("exp_smoothing", {"initialization": initialization})
    return SmoothingModel(spec, y.size, SmoothingConfig(), _fit_ses(y, None, initialization))


#: auto-ETS candidate grid in evaluation order
_ETS_TRENDS: tuple[tuple[str, str | None, bool], ...] = (("N", None, False), ("A", "add", False), ("Ad", "add", True))
_ETS_SEASONALS: tuple[tuple[str, str | None], ...] = (("N", None), ("A", "add"), ("M", "mul"))


class AutoEtsModel(SmoothingModel):
    def __init__(self, spec, n, cfg, fit, selected, candidates):
        super().__init__(spec, n, cfg, fit)
        #: (error, trend, seasonal) letters of the AICc winner
        self.selected = selected
        #: every fitted candidate as (triple, aicc); failures are absent
        self.candidates = candidates


def fit_auto_ets(spec: ForecasterSpec, train: TimeSeries | np.ndarray) -> AutoEtsModel:
    """Fit all admissible (error, trend, seasonal) combinations, keep the
    AICc minimizer.

    Multiplicative components are only attempted on strictly positive data;
    seasonal candidates require sp >= 2 and two full cycles.
    """
    sp = int(spec.params.get("sp", 1) or 1)
    y = as_train_values(train, 3, "auto_ets")
    positive = bool(np.all(y > 0))
    allow_seasonal = sp >= 2 and y.size >= 2 * sp

    candidates: list[tuple[tuple[str, str, str], float]] = []
    best: tuple[float, tuple[str, str, str], SmoothingConfig, _FitResult] | None = None
    failures: list[str] = []
    n = y.size

    for error_letter in ("A", "M"):
        if error_letter == "M" and not positive:
            continue
        for trend_letter, trend_mode, damped in _ETS_TRENDS:
            for seas_letter, seas_mode in _ETS_SEASONALS:
                if seas_mode is not None and not allow_seasonal:
                    continue
                if seas_mode == "mul" and not positive:
                    continue
                cfg = SmoothingConfig(trend=trend_mode, seasonal=seas_mode, damped=damped, sp=sp if seas_mode else 1)
                objective = "mul_loglik" if error_letter == "M" else "loglik"
                try:
                    fit = _estimate(
                        y, cfg, alpha=None, beta=None, gamma=None, phi=None,
                        initialization="estimated", objective=objective,
                    )
                except NonConvergence as exc:
                    failures.append(f"({error_letter},{trend_letter},{seas_letter}): {exc}")
                    continue
                neg2ll = _neg2_loglik(y, fit.mu, error_letter)
                if not math.isfinite(neg2ll):
                    failures.append(f"({error_letter},{trend_letter},{seas_letter}): non-finite likelihood")
                    continue
                k = 1 + 1  # alpha + sigma^2
                k += 1 if trend_mode is not None else 0      # beta
                k += 1 if damped else 0                      # phi
                k += 1 if seas_mode is not None else 0       # gamma
                k += 1                                       # initial level
                k += 1 if trend_mode is not None else 0      # initial trend
                k += sp - 1 if seas_mode is not None else 0  # initial seasonal cycle
                # small-sample correction blows up when n <= k + 1
                aicc = neg2ll + 2.0 * k * n / (n - k - 1) if n - k - 1 > 0 else math.inf
                triple = (error_letter, trend_letter, seas_letter)
                candidates.append((triple, aicc))
                if best is None or aicc < best[0]:
                    best = (aicc, triple, cfg, fit)

    if best is None:
        raise NonConvergence("every ETS candidate failed: " + "; ".join(failures[:4]))
    _, triple, cfg, fit = best
    return AutoEtsModel(spec, y.size, cfg, fit, triple, candidates)


def _neg2_loglik(y: np.ndarray, mu: np.ndarray, error_letter: str) -> float:
    n = y.size
    if error_letter == "M":
        if np.any(mu <= 0):
            return math.inf
        resid = (y - mu) / mu
        sigma2 = float((resid**2).mean())
        if sigma2 <= 0:
            sigma2 = 1e-300
        return n * math.log(2 * math.pi * sigma2) + n + 2 * float(np.log(np.abs(mu)).sum())
    sigma2 = float(((y - mu) ** 2).mean())
    if sigma2 <= 0:
        sigma2 = 1e-300
    return n * math.log(2 * math.pi * sigma2) + n
