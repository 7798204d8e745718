"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest

from tsbench.core import Dataset, Frequency, TimeSeries, canonical_dataset_name

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR_ENV = "TSBENCH_DATA_DIR"

#: (criterion label, outcome) pairs collected by the acceptance suite
ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def record_acceptance(label: str, outcome: str) -> None:
    ACCEPTANCE_RESULTS.append((label, outcome))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{outcome:>4}  {label}")


def find_dataset_file(name: str) -> Path | None:
    """Locate a real `.tsf` file by canonical dataset name, if present.

    Search order: $TSBENCH_DATA_DIR, ./data, tests/data. Returns None when
    the file is not available (reference-reproduction tests then skip).
    """
    roots = []
    env = os.environ.get(DATA_DIR_ENV)
    if env:
        roots.append(Path(env))
    roots += [REPO_ROOT / "data", Path(__file__).parent / "data"]
    want = canonical_dataset_name(name)
    for root in roots:
        if not root.is_dir():
            continue
        for path in sorted(root.glob("*.tsf")):
            if canonical_dataset_name(path.stem) == want:
                return path
    return None


def require_dataset(name: str) -> Path:
    path = find_dataset_file(name)
    if path is None:
        pytest.skip(f"dataset file for {name!r} not present (set {DATA_DIR_ENV} to a directory of Monash .tsf files)")
    return path


def make_series(values, name: str = "s", frequency: Frequency = Frequency.YEARLY) -> TimeSeries:
    return TimeSeries(name=name, start=None, values=np.asarray(values, dtype=float), frequency=frequency)


def make_dataset(series_values, frequency: Frequency, horizon: int, name: str = "ds") -> Dataset:
    series = tuple(
        make_series(vals, name=f"s{i}", frequency=frequency) for i, vals in enumerate(series_values)
    )
    return Dataset(name=name, series=series, frequency=frequency, horizon=horizon)


@pytest.fixture
def trending_seasonal_dataset() -> Dataset:
    rng = np.random.RandomState(11)
    t = np.arange(40)
    series = [20 + 0.4 * t + 3 * np.sin(2 * np.pi * t / 4) + rng.randn(40) * 0.3 for _ in range(3)]
    return make_dataset(series, Frequency.QUARTERLY, horizon=4)
