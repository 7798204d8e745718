"""Report emission: win/loss tables, rank reports, CD diagrams, exports.

All outputs are deterministic byte-for-byte: CSV with a header row and `.`
decimal point, JSON with fixed key order, and an SVG 1.1 critical
difference diagram containing no timestamps.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from tsbench.core import canonical_dataset_name
from tsbench.errors import MetricAbsent
from tsbench.harness import EvaluationRecord
from tsbench.manifest import format_score
from tsbench.ranking import (
    ScoreMatrix,
    SignificanceReport,
    WinLoss,
    rescale_per_dataset,
    significance_report,
    wins_losses,
)


def load_dataset_groups(path: str | Path | None = None) -> dict[str, dict[str, str]]:
    """Bundled dataset -> frequency/domain mapping (user-overridable)."""
    if path is not None:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    bundled = resources.files("tsbench").joinpath("resources/dataset_groups.json")
    return json.loads(bundled.read_text(encoding="utf-8"))


def _grid(records: Sequence[EvaluationRecord], metric: str):
    """Arrange records into (datasets, methods, scores, available)."""
    datasets: list[str] = []
    methods: list[str] = []
    for r in records:
        if r.dataset not in datasets:
            datasets.append(r.dataset)
        if r.method not in methods:
            methods.append(r.method)
    if not any(metric in r.scores for r in records if r.ok):
        raise MetricAbsent(f"metric {metric!r} is absent from every record")
    scores = np.full((len(datasets), len(methods)), np.nan)
    available = np.zeros_like(scores, dtype=bool)
    for r in records:
        i, j = datasets.index(r.dataset), methods.index(r.method)
        if r.ok and metric in r.scores:
            scores[i, j] = r.scores[metric]
            available[i, j] = True
    return datasets, methods, scores, available


def complete_matrix(records: Sequence[EvaluationRecord], metric: str) -> ScoreMatrix:
    """Rows restricted to datasets where every method has an Ok score."""
    datasets, methods, scores, available = _grid(records, metric)
    keep = available.all(axis=1)
    return ScoreMatrix(
        methods=tuple(methods),
        datasets=tuple(d for d, k in zip(datasets, keep) if k),
        scores=scores[keep],
    )


def wins_losses_table(records: Sequence[EvaluationRecord], metric: str) -> dict[str, WinLoss]:
    datasets, methods, scores, available = _grid(records, metric)
    return wins_losses(methods, datasets, scores, available)


def write_wins_losses_csv(records: Sequence[EvaluationRecord], metric: str, path: str | Path) -> None:
    table = wins_losses_table(records, metric)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "wins", "losses", "ties", "failures"])
        for method, wl in table.items():
            writer.writerow([method, wl.wins, wl.losses, wl.ties, wl.failures])


def rank_report(records: Sequence[EvaluationRecord], metric: str, alpha: float = 0.05) -> SignificanceReport:
    return significance_report(complete_matrix(records, metric), alpha=alpha)


def write_rank_json(report: SignificanceReport, path: str | Path) -> None:
    doc = {
        "methods": list(report.methods),
        "avg_rank": [format_score(v) for v in report.avg_rank],
        "friedman_statistic": format_score(report.friedman_statistic),
        "friedman_p": format_score(report.friedman_p),
        "alpha": format_score(report.alpha),
        "pairwise": [
            {
                "a": report.methods[i],
                "b": report.methods[j],
                "p_raw": format_score(raw),
                "p_holm": format_score(adj),
            }
            for (i, j), (raw, adj) in sorted(report.pairwise.items())
        ],
        "cliques": [[report.methods[i] for i in clique] for clique in report.cliques],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def write_rescaled_csv(records: Sequence[EvaluationRecord], metric: str, path: str | Path) -> None:
    """Per-dataset 0-1 rescaled scores for external distribution plots."""
    matrix = rescale_per_dataset(complete_matrix(records, metric))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset"] + list(matrix.methods))
        for name, row in zip(matrix.datasets, matrix.scores):
            writer.writerow([name] + [format_score(v) for v in row])


def group_summaries(
    records: Sequence[EvaluationRecord],
    metric: str,
    key: str,
    groups: Mapping[str, Mapping[str, str]] | None = None,
) -> dict[tuple[str, str], tuple[float, float, int]]:
    """Mean and sample std of a metric per (group, method).

    ``key`` selects the grouping axis ("frequency" or "domain"). Datasets
    missing from the mapping are skipped; so are non-Ok records.
    """
    if key not in ("frequency", "domain"):
        raise ValueError(f"grouping key must be 'frequency' or 'domain', got {key!r}")
    mapping = load_dataset_groups() if groups is None else groups
    by_group: dict[tuple[str, str], list[float]] = {}
    for r in records:
        if not r.ok or metric not in r.scores:
            continue
        meta = mapping.get(canonical_dataset_name(r.dataset))
        if meta is None or key not in meta:
            continue
        by_group.setdefault((meta[key], r.method), []).append(r.scores[metric])
    out: dict[tuple[str, str], tuple[float, float, int]] = {}
    for (group, method), vals in by_group.items():
        arr = np.asarray(vals, dtype=float)
        std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
        out[(group, method)] = (float(arr.mean()), std, arr.size)
    return out


def write_group_summary_csv(
    records: Sequence[EvaluationRecord],
    metric: str,
    key: str,
    path: str | Path,
    groups: Mapping[str, Mapping[str, str]] | None = None,
) -> None:
    table = group_summaries(records, metric, key, groups)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([key, "method", "mean", "std", "count"])
        for (group, method), (mean, std, count) in sorted(table.items()):
            writer.writerow([group, method, format_score(mean), format_score(std), count])


# --- critical-difference diagram ---

_SVG_WIDTH = 720
_SVG_MARGIN = 90
_ROW_HEIGHT = 22


def cd_diagram_svg(report: SignificanceReport) -> str:
    """Render average ranks and cliques as a static SVG 1.1 document.

    A horizontal axis spans [1, k]; each method gets a labeled tick at its
    average rank and each clique a horizontal bar below the axis.
    """
    k = len(report.methods)
    order = sorted(range(k), key=lambda i: (report.avg_rank[i], i))
    axis_y = 46.0
    inner = _SVG_WIDTH - 2 * _SVG_MARGIN

    def x_of(rank: float) -> float:
        if k == 1:
            return _SVG_MARGIN + inner / 2
        return _SVG_MARGIN + (rank - 1.0) / (k - 1.0) * inner

    bar_rows = len(report.cliques)
    label_rows = (k + 1) // 2
    height = int(axis_y + 14 + bar_rows * 12 + label_rows * _ROW_HEIGHT + 60)

    parts: list[str] = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_SVG_WIDTH}" height="{height}" font-family="sans-serif" font-size="12">'
    )
    parts.append(
        f'<line x1="{x_of(1):.2f}" y1="{axis_y:.2f}" x2="{x_of(k):.2f}" y2="{axis_y:.2f}" '
        f'stroke="black" stroke-width="1.5"/>'
    )
    for tick in range(1, k + 1):
        x = x_of(tick)
        parts.append(
            f'<line x1="{x:.2f}" y1="{axis_y - 5:.2f}" x2="{x:.2f}" y2="{axis_y:.2f}" stroke="black"/>'
        )
        parts.append(f'<text x="{x:.2f}" y="{axis_y - 10:.2f}" text-anchor="middle">{tick}</text>')

    clique_base = axis_y + 10
    for row, clique in enumerate(report.cliques):
        lo = min(report.avg_rank[i] for i in clique)
        hi = max(report.avg_rank[i] for i in clique)
        y = clique_base + row * 12
        parts.append(
            f'<line x1="{x_of(lo):.2f}" y1="{y:.2f}" x2="{x_of(hi):.2f}" y2="{y:.2f}" '
            f'stroke="black" stroke-width="4" class="clique"/>'
        )

    label_base = clique_base + bar_rows * 12 + 16
    for pos, idx in enumerate(order):
        rank = report.avg_rank[idx]
        x = x_of(rank)
        left = pos < (k + 1) // 2
        row = pos if left else k - 1 - pos
        y = label_base + row * _ROW_HEIGHT
        label_x = _SVG_MARGIN - 8 if left else _SVG_WIDTH - _SVG_MARGIN + 8
        anchor = "end" if left else "start"
        parts.append(
            f'<polyline points="{x:.2f},{axis_y:.2f} {x:.2f},{y:.2f} {label_x:.2f},{y:.2f}" '
            f'fill="none" stroke="black" stroke-width="0.8"/>'
        )
        parts.append(
            f'<text x="{label_x:.2f}" y="{y - 3:.2f}" text-anchor="{anchor}">'
            f"{_escape(report.methods[idx])} ({report.avg_rank[idx]:.4f})</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_cd_diagram_svg(report: SignificanceReport, path: str | Path) -> None:
    Path(path).write_text(cd_diagram_svg(report), encoding="utf-8")
