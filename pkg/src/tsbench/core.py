"""Core domain types: series, datasets, frequencies, and the temporal split.

All types are immutable after construction and safe to share between
threads. Missing observations are encoded as NaN inside the value array;
every arithmetic consumer either imputes them first (see :func:`locf`) or
rejects them, so NaN never leaks into forecaster math.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Sequence

import numpy as np

from tsbench.errors import EmptyInput, SeriesTooShort, UnknownDataset, UnknownFrequency


class Frequency(str, Enum):
    """Recording frequency of a series; values match the `.tsf` spellings."""

    YEARLY = "yearly"
    QUARTERLY = "quarterly"
    MONTHLY = "monthly"
    WEEKLY = "weekly"
    DAILY = "daily"
    HOURLY = "hourly"
    HALF_HOURLY = "half_hourly"
    MINUTELY = "minutely"
    FOUR_SECONDS = "4_seconds"


#: Observations per seasonal cycle. Weekly uses the dominant 52 convention.
SEASONAL_PERIODS: dict[Frequency, int] = {
    Frequency.YEARLY: 1,
    Frequency.QUARTERLY: 4,
    Frequency.MONTHLY: 12,
    Frequency.WEEKLY: 52,
    Frequency.DAILY: 7,
    Frequency.HOURLY: 24,
    Frequency.HALF_HOURLY: 48,
    Frequency.MINUTELY: 1440,
    Frequency.FOUR_SECONDS: 21600,
}


def seasonal_period(frequency: Frequency) -> int:
    """Seasonal period (sp) for a frequency; total over the enum."""
    return SEASONAL_PERIODS[Frequency(frequency)]


def frequency_from_string(s: str) -> Frequency:
    """Case-insensitive frequency lookup; accepts `-` for `_`.

    Raises UnknownFrequency for spellings outside the enum.
    """
    if not isinstance(s, str):
        raise UnknownFrequency(f"not a frequency string: {s!r}")
    key = s.strip().lower().replace("-", "_")
    if key == "four_seconds":
        return Frequency.FOUR_SECONDS
    for freq in Frequency:
        if freq.value == key:
            return freq
    raise UnknownFrequency(f"unknown frequency {s!r}")


def canonical_dataset_name(name: str) -> str:
    """Normalize a dataset name or file stem for horizon/group lookups.

    Lowercases, maps punctuation to underscores and drops the filler tokens
    that Monash file names carry ("dataset", "without missing values", ...).
    """
    tokens = re.split(r"[^0-9a-z]+", name.lower())
    drop = {"dataset", "with", "without", "missing", "values", "nomissing", ""}
    kept = [t for t in tokens if t not in drop]
    return "_".join(kept)


#: Per-dataset forecast horizons, keyed by canonical name.
DATASET_HORIZONS: dict[str, int] = {
    "m1_yearly": 6,
    "m1_quarterly": 6,
    "m1_quaterly": 6,
    "m1_monthly": 18,
    "m3_yearly": 6,
    "m3_quarterly": 8,
    "m3_quaterly": 8,
    "m3_monthly": 18,
    "m4_yearly": 6,
    "m4_quarterly": 8,
    "m4_monthly": 18,
    "m4_weekly": 13,
    "m4_daily": 14,
    "m4_hourly": 48,
    "tourism_yearly": 4,
    "tourism_quarterly": 8,
    "tourism_monthly": 24,
    "bitcoin": 30,
    "melbourne_pedestrian_counts": 24,
    "pedestrian_counts": 24,
    "nn5_daily": 56,
    "nn5_weekly": 8,
    "solar_weekly": 5,
    "electricity_hourly": 168,
    "electricity_weekly": 8,
    "car_parts": 12,
    "fred_md": 12,
    "traffic_hourly": 168,
    "traffic_weekly": 8,
    "hospital": 12,
    "covid_19_deaths": 30,
    "covid_deaths": 30,
    "sunspot_daily": 30,
    "sunspot": 30,
    "saugeen_river_flow": 30,
    "saugeen": 30,
    "us_births": 30,
    "wind_power_4_seconds_observations": 21600,
    "wind_power": 21600,
    "vehicle_trips": 30,
    "rideshare": 168,
    "temperature_rain": 30,
    "kdd_cup": 168,
    "kdd_cup_2018": 168,
    "london_smart_meters": 48,
    "wind_farms": 1440,
    "wind_farms_minutely": 1440,
    "kaggle_wikipedia_web_traffic_daily": 59,
    "kaggle_web_traffic_daily": 59,
    "kaggle_wikipedia_web_traffic_weekly": 8,
    "kaggle_web_traffic_weekly": 8,
}

#: Horizon fallback by frequency for datasets outside the bundled table.
FREQUENCY_HORIZONS: dict[Frequency, int] = {
    Frequency.YEARLY: 6,
    Frequency.QUARTERLY: 8,
    Frequency.MONTHLY: 18,
    Frequency.WEEKLY: 8,
    Frequency.DAILY: 30,
    Frequency.HOURLY: 48,
}


def default_horizon(dataset_name: str, frequency: Frequency | None = None, *, strict: bool = False) -> int:
    """Forecast horizon for a named dataset.

    Listed datasets resolve through the bundled table; unknown names fall
    back to the per-frequency default unless ``strict`` is set.
    """
    key = canonical_dataset_name(dataset_name)
    if key in DATASET_HORIZONS:
        return DATASET_HORIZONS[key]
    if strict:
        raise UnknownDataset(f"no bundled horizon for dataset {dataset_name!r}")
    if frequency is not None:
        freq = Frequency(frequency)
        if freq in FREQUENCY_HORIZONS:
            return FREQUENCY_HORIZONS[freq]
    raise UnknownDataset(
        f"dataset {dataset_name!r} is not in the horizon table and frequency "
        f"{frequency!r} has no fallback horizon"
    )


def _as_values(values: Sequence[float] | np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"series values must be 1-D, got shape {arr.shape}")
    if arr.size < 1:
        raise ValueError("series must contain at least one value")
    # NaN encodes a missing observation; infinities are never legal.
    if np.isinf(arr).any():
        raise ValueError("series values must be finite or missing (NaN)")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """A named, equally spaced sequence of observations.

    ``start`` is provenance only; all algorithms work on integer indices
    (index i corresponds to start + i frequency steps).
    """

    name: str
    start: datetime | None
    values: np.ndarray
    frequency: Frequency

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_values(self.values))
        object.__setattr__(self, "frequency", Frequency(self.frequency))

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def has_missing(self) -> bool:
        return bool(np.isnan(self.values).any())

    def with_values(self, values: Sequence[float] | np.ndarray, *, start: datetime | None = None) -> TimeSeries:
        return TimeSeries(self.name, start if start is not None else self.start, values, self.frequency)


def locf(values: np.ndarray) -> np.ndarray:
    """Last-observation-carried-forward imputation.

    Leading missing values are back-filled from the first observation.
    Raises EmptyInput when every value is missing.
    """
    arr = np.asarray(values, dtype=float)
    mask = np.isnan(arr)
    if not mask.any():
        return arr.copy()
    if mask.all():
        raise EmptyInput("cannot impute a series with no observed values")
    idx = np.where(mask, 0, np.arange(arr.size))
    np.maximum.accumulate(idx, out=idx)
    out = arr[idx]
    first_valid = int(np.flatnonzero(~mask)[0])
    out[:first_valid] = arr[first_valid]
    return out


@dataclass(frozen=True)
class Dataset:
    """A collection of series sharing frequency, horizon, and flags."""

    name: str
    series: tuple[TimeSeries, ...]
    frequency: Frequency
    horizon: int
    contains_missing: bool = False
    equal_length: bool = False
    #: where the horizon came from: "file", "table", or "frequency_fallback"
    horizon_source: str = "file"

    def __post_init__(self) -> None:
        object.__setattr__(self, "series", tuple(self.series))
        object.__setattr__(self, "frequency", Frequency(self.frequency))
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        for ts in self.series:
            if ts.frequency != self.frequency:
                raise ValueError(
                    f"series {ts.name!r} frequency {ts.frequency} differs from "
                    f"dataset frequency {self.frequency}"
                )
        if self.equal_length and self.series:
            lengths = {len(ts) for ts in self.series}
            if len(lengths) > 1:
                raise ValueError(f"equal_length dataset has mixed lengths {sorted(lengths)}")

    def __len__(self) -> int:
        return len(self.series)


def temporal_train_test_split(series: TimeSeries, horizon: int) -> tuple[TimeSeries, TimeSeries]:
    """Hold out the final ``horizon`` observations as the test window.

    The concatenation of the returned (train, test) reconstructs the input
    exactly. Raises SeriesTooShort when the train part would be empty.
    """
    h = int(horizon)
    if h < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    n = len(series)
    if n <= h:
        raise SeriesTooShort(f"series {series.name!r} has {n} points, needs > {h} for horizon {h}")
    train = series.with_values(series.values[: n - h])
    # the test start would need calendar arithmetic; timestamps are provenance only
    test = series.with_values(series.values[n - h :], start=None)
    return train, test


def split_dataset(dataset: Dataset) -> list[tuple[TimeSeries, TimeSeries]]:
    """Apply the temporal split to every series with the dataset horizon."""
    return [temporal_train_test_split(ts, dataset.horizon) for ts in dataset.series]
