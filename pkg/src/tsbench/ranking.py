"""Cross-method statistical comparison.

Per-dataset fractional ranking, the Friedman test with tie correction,
Holm step-down p-value adjustment, pairwise Wilcoxon signed-rank and
paired t tests, average-rank cliques for critical-difference diagrams,
win/loss tallies, and per-dataset 0-1 rescaling.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from tsbench._special import chi2_sf, normal_sf, student_t_sf
from tsbench.errors import (
    AllDifferencesZero,
    DegenerateInput,
    InvalidP,
    ZeroVariance,
)

DEFAULT_ALPHA = 0.05


@dataclass(frozen=True)
class ScoreMatrix:
    """Complete N x k score grid (rows: datasets, columns: methods)."""

    methods: tuple[str, ...]
    datasets: tuple[str, ...]
    scores: np.ndarray
    lower_is_better: bool = True

    def __post_init__(self) -> None:
        arr = np.asarray(self.scores, dtype=float)
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "datasets", tuple(self.datasets))
        object.__setattr__(self, "scores", arr)
        if arr.shape != (len(self.datasets), len(self.methods)):
            raise ValueError(f"scores shape {arr.shape} does not match labels")
        if np.isnan(arr).any():
            raise ValueError("score matrix must not contain missing cells; drop incomplete rows first")


@dataclass(frozen=True)
class RankTable:
    methods: tuple[str, ...]
    ranks: np.ndarray  # N x k, fractional
    avg_rank: np.ndarray  # k


@dataclass(frozen=True)
class SignificanceReport:
    methods: tuple[str, ...]
    avg_rank: np.ndarray
    friedman_statistic: float
    friedman_p: float
    pairwise: dict[tuple[int, int], tuple[float, float]]  # (i, j) -> (raw, holm)
    cliques: tuple[tuple[int, ...], ...]
    alpha: float


def _rank_vector(row: np.ndarray) -> np.ndarray:
    """Fractional ranks (1 = best value); ties share the average position."""
    order = np.argsort(row, kind="stable")
    ranks = np.empty(row.size, dtype=float)
    i = 0
    while i < row.size:
        j = i
        while j + 1 < row.size and row[order[j + 1]] == row[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def rank_rows(matrix: ScoreMatrix) -> RankTable:
    """Per-dataset ranks; rank 1 goes to the best score."""
    if len(matrix.methods) < 2:
        raise DegenerateInput("ranking needs at least two methods")
    scores = matrix.scores if matrix.lower_is_better else -matrix.scores
    ranks = np.vstack([_rank_vector(row) for row in scores])
    return RankTable(matrix.methods, ranks, ranks.mean(axis=0))


def friedman_test(ranks: RankTable | np.ndarray) -> tuple[float, float]:
    """Friedman chi-square with tie correction; p from the chi2 upper tail."""
    table = ranks.ranks if isinstance(ranks, RankTable) else np.asarray(ranks, dtype=float)
    n, k = table.shape
    if k < 2:
        raise DegenerateInput("friedman test needs at least two methods")
    if n < 2:
        raise DegenerateInput("friedman test needs at least two datasets")
    rank_sums = table.sum(axis=0)
    stat = 12.0 / (n * k * (k + 1)) * float((rank_sums**2).sum()) - 3.0 * n * (k + 1)
    ties = 0.0
    for row in table:
        _, counts = np.unique(row, return_counts=True)
        ties += float((counts**3 - counts).sum())
    correction = 1.0 - ties / (n * k * (k * k - 1))
    if correction <= 0:
        return 0.0, 1.0  # every row fully tied
    stat /= correction
    stat = max(stat, 0.0)
    return float(stat), chi2_sf(stat, k - 1)


def holm_adjust(p_values: Sequence[float]) -> list[float]:
    """Holm step-down adjustment; monotone and capped at 1."""
    ps = [float(p) for p in p_values]
    for p in ps:
        if not 0.0 <= p <= 1.0 or math.isnan(p):
            raise InvalidP(f"p-value out of range: {p}")
    m = len(ps)
    order = sorted(range(m), key=lambda i: ps[i])
    adjusted = [0.0] * m
    running = 0.0
    for pos, idx in enumerate(order):
        running = max(running, (m - pos) * ps[idx])
        adjusted[idx] = min(1.0, running)
    return adjusted


def _signed_ranks(diffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ranks = _rank_vector(np.abs(diffs))
    return ranks, diffs > 0


def wilcoxon_signed_rank(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Two-sided Wilcoxon signed-rank test.

    Zero differences are dropped. Exact permutation p for n <= 25 (a
    doubled-rank subset-sum count, valid under ties); otherwise a normal
    approximation with tie correction and continuity correction.
    """
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.shape != b.shape:
        raise DegenerateInput("wilcoxon needs equal-length samples")
    diffs = a - b
    diffs = diffs[diffs != 0]
    n = diffs.size
    if n == 0:
        raise AllDifferencesZero("all paired differences are zero")
    ranks, positive = _signed_ranks(diffs)
    w_plus = float(ranks[positive].sum())
    w_minus = float(ranks[~positive].sum())
    stat = min(w_plus, w_minus)
    if n <= 25:
        p = _wilcoxon_exact_p(ranks, stat)
    else:
        mean = n * (n + 1) / 4.0
        _, counts = np.unique(ranks, return_counts=True)
        tie_term = float((counts**3 - counts).sum()) / 48.0
        var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term
        if var <= 0:
            raise AllDifferencesZero("zero variance in signed ranks")
        z = (stat - mean + 0.5) / math.sqrt(var)  # continuity correction
        p = 2.0 * (1.0 - normal_sf(z)) if z > 0 else 2.0 * normal_sf(-z)
        p = min(1.0, p)
    return stat, p


def _wilcoxon_exact_p(ranks: np.ndarray, stat: float) -> float:
    """P = 2 P(W <= stat) by subset-sum counting over doubled ranks."""
    doubled = np.rint(2.0 * ranks).astype(int)  # half-integer tie ranks double to ints
    total = int(doubled.sum())
    counts = np.zeros(total + 1, dtype=float)
    counts[0] = 1.0
    for r in doubled:
        counts[r:] += counts[: counts.size - r].copy()
    threshold = int(math.floor(2.0 * stat + 1e-9))
    cdf = counts[: threshold + 1].sum() / counts.sum()
    return min(1.0, 2.0 * cdf)


def paired_t_test(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Two-sided paired t test."""
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.shape != b.shape:
        raise DegenerateInput("paired t test needs equal-length samples")
    d = a - b
    n = d.size
    if n < 2:
        raise DegenerateInput("paired t test needs at least two pairs")
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        raise ZeroVariance("paired differences have zero variance")
    t = float(d.mean() / (sd / math.sqrt(n)))
    p = 2.0 * student_t_sf(abs(t), n - 1)
    return t, min(1.0, p)


def cd_cliques(
    avg_rank: Sequence[float],
    pairwise_adjusted_p: Mapping[tuple[int, int], float],
    alpha: float = DEFAULT_ALPHA,
) -> tuple[tuple[int, ...], ...]:
    """Maximal rank-contiguous groups whose pairs are all non-significant.

    Methods are ordered by average rank; a clique is a contiguous window in
    that order where every pair has adjusted p >= alpha. Windows contained
    in a larger clique are dropped. Singletons are not reported.
    """
    k = len(avg_rank)
    order = sorted(range(k), key=lambda i: (avg_rank[i], i))

    def non_significant(i: int, j: int) -> bool:
        key = (i, j) if (i, j) in pairwise_adjusted_p else (j, i)
        return pairwise_adjusted_p[key] >= alpha

    cliques: list[tuple[int, ...]] = []
    for start in range(k):
        end = start
        while end + 1 < k and all(
            non_significant(order[a], order[end + 1]) for a in range(start, end + 1)
        ):
            end += 1
        if end > start:
            clique = tuple(order[start : end + 1])
            if not any(set(clique) <= set(c) for c in cliques):
                cliques.append(clique)
    return tuple(cliques)


def rescale_per_dataset(matrix: ScoreMatrix) -> ScoreMatrix:
    """Row-wise min-max rescale to [0, 1]; constant rows map to zeros."""
    scores = matrix.scores
    lo = scores.min(axis=1, keepdims=True)
    hi = scores.max(axis=1, keepdims=True)
    span = hi - lo
    out = np.where(span > 0, (scores - lo) / np.where(span > 0, span, 1.0), 0.0)
    return ScoreMatrix(matrix.methods, matrix.datasets, out, matrix.lower_is_better)


@dataclass(frozen=True)
class WinLoss:
    wins: int = 0
    losses: int = 0
    ties: int = 0
    failures: int = 0


def wins_losses(
    methods: Sequence[str],
    datasets: Sequence[str],
    scores: np.ndarray,
    available: np.ndarray,
) -> dict[str, WinLoss]:
    """Per-method win/loss/tie/failure tallies over a (possibly gappy) grid.

    ``scores`` is N x k with arbitrary values where ``available`` is False.
    Rows where no method is available contribute nothing; otherwise the
    best available score wins (full ties split into the tie column),
    remaining available methods lose, unavailable methods record failures.
    """
    scores = np.asarray(scores, dtype=float)
    available = np.asarray(available, dtype=bool)
    k = len(methods)
    if scores.shape != (len(datasets), k) or available.shape != scores.shape:
        raise ValueError("scores/available must be N x k")
    wins = np.zeros(k, dtype=int)
    losses = np.zeros(k, dtype=int)
    ties = np.zeros(k, dtype=int)
    failures = np.zeros(k, dtype=int)
    for row, avail in zip(scores, available):
        if not avail.any():
            continue
        failures += ~avail
        best = row[avail].min()
        winners = avail & (row == best)
        if winners.sum() > 1:
            ties += winners
        else:
            wins += winners
        losses += avail & ~winners
    return {m: WinLoss(int(wins[i]), int(losses[i]), int(ties[i]), int(failures[i])) for i, m in enumerate(methods)}


def significance_report(matrix: ScoreMatrix, alpha: float = DEFAULT_ALPHA) -> SignificanceReport:
    """Friedman + pairwise Wilcoxon with Holm adjustment + CD cliques."""
    table = rank_rows(matrix)
    stat, p = friedman_test(table)
    pairs = list(itertools.combinations(range(len(matrix.methods)), 2))
    raw: list[float] = []
    for i, j in pairs:
        try:
            _, pw = wilcoxon_signed_rank(matrix.scores[:, i], matrix.scores[:, j])
        except AllDifferencesZero:
            pw = 1.0
        raw.append(pw)
    adjusted = holm_adjust(raw)
    pairwise = {pair: (raw[idx], adjusted[idx]) for idx, pair in enumerate(pairs)}
    cliques = cd_cliques(table.avg_rank, {pair: adj for pair, (_, adj) in pairwise.items()}, alpha)
    return SignificanceReport(
        methods=matrix.methods,
        avg_rank=table.avg_rank,
        friedman_statistic=stat,
        friedman_p=p,
        pairwise=pairwise,
        cliques=cliques,
        alpha=alpha,
    )
