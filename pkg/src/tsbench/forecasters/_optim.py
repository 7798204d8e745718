"""Deterministic derivative-free optimizers for smoothing-parameter fits.

Both routines are fully deterministic given their inputs: fixed initial
simplex, no randomness, bounded by clipping. Tolerance 1e-6 and a 500
evaluation cap match the toolkit-wide estimation defaults.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-6,
    max_evals: int = 500,
) -> tuple[float, float]:
    """Minimize a univariate function on [lo, hi]; returns (x, f(x))."""
    a, b = float(lo), float(hi)
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    while abs(b - a) > tol and evals < max_evals:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
        evals += 1
    return (c, fc) if fc < fd else (d, fd)


def nelder_mead(
    f: Callable[[np.ndarray], float],
    x0: Sequence[float],
    *,
    step: float | Sequence[float] = 0.1,
    bounds: Sequence[tuple[float, float] | None] | None = None,
    tol: float = 1e-6,
    max_evals: int = 500,
) -> tuple[np.ndarray, float]:
    """Nelder-Mead simplex minimization with clipped box bounds."""
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    steps = np.full(n, step, dtype=float) if np.isscalar(step) else np.asarray(step, dtype=float)

    def clip(x: np.ndarray) -> np.ndarray:
        if bounds is None:
            return x
        out = x.copy()
        for i, b in enumerate(bounds):
            if b is not None:
                out[i] = min(max(out[i], b[0]), b[1])
        return out

    evals = 0

    def eval_f(x: np.ndarray) -> float:
        nonlocal evals
        evals += 1
        val = f(x)
        return float(val) if np.isfinite(val) else math.inf

    simplex = [clip(x0)]
    for i in range(n):
        point = x0.copy()
        point[i] += steps[i] if steps[i] != 0 else 0.1
        point = clip(point)
        if np.allclose(point, simplex[0]):
            point[i] -= 2 * (steps[i] if steps[i] != 0 else 0.1)
            point = clip(point)
        simplex.append(point)
    values = [eval_f(p) for p in simplex]

    alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5
    while evals < max_evals:
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        spread = abs(values[-1] - values[0])
        size = max(np.max(np.abs(p - simplex[0])) for p in simplex[1:]) if n else 0.0
        if spread <= tol and size <= tol:
            break
        centroid = np.mean(simplex[:-1], axis=0)
        reflected = clip(centroid + alpha * (centroid - simplex[-1]))
        fr = eval_f(reflected)
        if values[0] <= fr < values[-2]:
            simplex[-1], values[-1] = reflected, fr
            continue
        if fr < values[0]:
            expanded = clip(centroid + gamma * (reflected - centroid))
            fe = eval_f(expanded)
            if fe < fr:
                simplex[-1], values[-1] = expanded, fe
            else:
                simplex[-1], values[-1] = reflected, fr
            continue
        contracted = clip(centroid + rho * (simplex[-1] - centroid))
        fc = eval_f(contracted)
        if fc < values[-1]:
            simplex[-1], values[-1] = contracted, fc
            continue
        best = simplex[0]
        simplex = [best] + [clip(best + sigma * (p - best)) for p in simplex[1:]]
        values = [values[0]] + [eval_f(p) for p in simplex[1:]]

    idx = int(np.argmin(values))
    return simplex[idx], float(values[idx])
