"""Evaluation harness: split, impute, fit, predict, score, with budgets.

For each (dataset, method) pair the harness walks the series, applies LOCF
imputation and the temporal split, and aggregates per-series metric scores
by mean. The wall-clock budget is checked cooperatively between series;
exceeding it yields a Timeout record. Any declared forecaster or metric
error on any series turns the whole record into NA carrying the first
error, matching the one-status-per-dataset reporting convention.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from tsbench.core import Dataset, locf, seasonal_period, temporal_train_test_split
from tsbench.errors import DatasetLoadError, TsbenchError
from tsbench.forecasters import ForecasterSpec, fit
from tsbench.metrics import aggregate, parse_metric, score
from tsbench.tsf import parse_tsf

DEFAULT_BUDGET_SECONDS = 3600.0


class Status(str, Enum):
    OK = "ok"
    NA = "na"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class EvaluationRecord:
    """The atomic benchmark result for one (dataset, method) pair."""

    dataset: str
    method: str
    scores: dict[str, float]
    status: Status
    na_reason: str | None = None
    runtime_seconds: float = 0.0
    series_evaluated: int = 0

    def __post_init__(self) -> None:
        if (self.status is Status.OK) != bool(self.scores):
            raise ValueError("scores must be nonempty exactly when status is ok")
        if self.runtime_seconds < 0:
            raise ValueError("runtime must be nonnegative")

    @property
    def ok(self) -> bool:
        return self.status is Status.OK


@dataclass(frozen=True)
class BenchmarkConfig:
    datasets: tuple[str, ...]
    methods: tuple[ForecasterSpec, ...]
    metrics: tuple[str, ...] = ("smape", "mase")
    budget_seconds: float = DEFAULT_BUDGET_SECONDS
    parallelism: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "datasets", tuple(self.datasets))
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        if not self.datasets or not self.methods or not self.metrics:
            raise ValueError("datasets, methods, and metrics must be nonempty")
        if self.budget_seconds < 0:
            raise ValueError("budget_seconds must be >= 0")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        for m in self.metrics:
            parse_metric(m)


def evaluate(
    method: ForecasterSpec,
    dataset: Dataset,
    metrics: Sequence[str] = ("smape", "mase"),
    budget_seconds: float = DEFAULT_BUDGET_SECONDS,
    clock: Callable[[], float] = time.monotonic,
) -> EvaluationRecord:
    """Evaluate one forecaster on one dataset.

    Specs that leave the seasonal period unset get the dataset frequency's
    period injected (so e.g. naive becomes last-season repetition on
    seasonal data); the same period scales MASE.
    """
    if len(dataset) == 0:
        raise ValueError(f"dataset {dataset.name!r} has no series")
    start = clock()
    deadline = start + budget_seconds
    sp = seasonal_period(dataset.frequency)
    spec = method.with_default_sp(sp)
    per_metric: dict[str, list[float]] = {m: [] for m in metrics}
    evaluated = 0

    def finish(status: Status, reason: str | None = None) -> EvaluationRecord:
        scores = {m: aggregate(v) for m, v in per_metric.items()} if status is Status.OK else {}
        return EvaluationRecord(
            dataset=dataset.name,
            method=method.name or method.method,
            scores=scores,
            status=status,
            na_reason=reason,
            runtime_seconds=max(clock() - start, 0.0),
            series_evaluated=evaluated,
        )

    for ts in dataset.series:
        if clock() >= deadline:
            return finish(Status.TIMEOUT)
        try:
            clean = ts if not ts.has_missing else ts.with_values(locf(ts.values))
            train, test = temporal_train_test_split(clean, dataset.horizon)
            model = fit(spec, train)
            forecast = model.predict(dataset.horizon)
            for m in metrics:
                per_metric[m].append(score(m, test.values, forecast, train=train.values, m=sp))
        except TsbenchError as exc:
            # declared failures (short series, bad data, degenerate MASE
            # scaling, ...) poison the whole record, never partial scores
            return finish(Status.NA, f"{type(exc).__name__}: {exc}")
        evaluated += 1
    return finish(Status.OK)


def load_dataset(path: str | Path) -> Dataset:
    """Parse a `.tsf` file, wrapping any failure as DatasetLoadError."""
    p = Path(path)
    try:
        return parse_tsf(p)
    except OSError as exc:
        raise DatasetLoadError(f"cannot read {p}: {exc}") from exc
    except (TsbenchError, ValueError) as exc:
        raise DatasetLoadError(f"cannot parse {p}: {exc}") from exc


def run_benchmark(
    config: BenchmarkConfig,
    datasets: Sequence[Dataset] | None = None,
    clock: Callable[[], float] = time.monotonic,
) -> list[EvaluationRecord]:
    """Evaluate the full datasets x methods grid.

    Output ordering is (dataset, method) lexicographic and scores are
    schedule-independent: any parallelism yields identical records apart
    from runtimes. Dataset files are loaded (and validated) up front.
    """
    if datasets is None:
        datasets = [load_dataset(p) for p in config.datasets]
    jobs = [(ds, spec) for ds in datasets for spec in config.methods]

    def run(job: tuple[Dataset, ForecasterSpec]) -> EvaluationRecord:
        ds, spec = job
        return evaluate(spec, ds, config.metrics, config.budget_seconds, clock=clock)

    if config.parallelism == 1:
        records = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            records = list(pool.map(run, jobs))
    return sorted(records, key=lambda r: (r.dataset, r.method))
