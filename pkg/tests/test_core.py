import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsbench.core import (
    DATASET_HORIZONS,
    Dataset,
    Frequency,
    TimeSeries,
    canonical_dataset_name,
    default_horizon,
    frequency_from_string,
    locf,
    seasonal_period,
    temporal_train_test_split,
)
from tsbench.errors import EmptyInput, SeriesTooShort, UnknownDataset, UnknownFrequency

from conftest import make_series

EXPECTED_PERIODS = {
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

# the bundled per-dataset horizon table, re-transcribed independently
HORIZON_TABLE = [
    ("M1 yearly", "yearly", 6),
    ("M1 quaterly", "quarterly", 6),
    ("M1 monthly", "monthly", 18),
    ("M3 yearly", "yearly", 6),
    ("M3 quaterly", "quarterly", 8),
    ("M3 monthly", "monthly", 18),
    ("M4 Yearly", "yearly", 6),
    ("M4 Quarterly", "quarterly", 8),
    ("M4 Monthly", "monthly", 18),
    ("M4 Weekly", "weekly", 13),
    ("M4 Daily", "daily", 14),
    ("M4 Hourly", "hourly", 48),
    ("Tourism Yearly", "yearly", 4),
    ("Tourism Quarterly", "quarterly", 8),
    ("Tourism Monthly", "monthly", 24),
    ("Bitcoin Dataset without Missing Values", "daily", 30),
    ("Melbourne Pedestrian Counts", "hourly", 24),
    ("NN5 Daily Dataset without Missing Values", "daily", 56),
    ("NN5 Weekly", "weekly", 8),
    ("Solar Weekly", "weekly", 5),
    ("Electricity Hourly", "hourly", 168),
    ("Electricity Weekly", "weekly", 8),
    ("Car Parts (without Missing Values)", "monthly", 12),
    ("FRED-MD", "monthly", 12),
    ("Traffic Hourly", "hourly", 168),
    ("Traffic Weekly", "weekly", 8),
    ("Hospital", "monthly", 12),
    ("COVID-19 Deaths", "daily", 30),
    ("Sunspot Daily without Missing Values", "daily", 30),
    ("Saugeen River Flow", "daily", 30),
    ("US Births", "daily", 30),
    ("Wind Power Dataset 4 Seconds Observations", "4_seconds", 21600),
    ("Vehicle Trips without Missing Values", "daily", 30),
    ("Rideshare without Missing Values", "hourly", 168),
    ("Temperature Rain without Missing Values", "daily", 30),
    ("KDD Cup without Missing Values", "hourly", 168),
    ("London Smart Meters Dataset without Missing Values", "half_hourly", 48),
    ("Wind Farms Dataset without Missing Values", "minutely", 1440),
    ("Kaggle Wikipedia Web Traffic Daily without Missing Values", "daily", 59),
    ("Kaggle Wikipedia Web Traffic Weekly", "weekly", 8),
]


class TestSeasonalPeriod:
    def test_quarterly(self):
        assert seasonal_period(Frequency.QUARTERLY) == 4

    def test_yearly(self):
        assert seasonal_period(Frequency.YEARLY) == 1

    def test_half_hourly_is_48_steps_per_day(self):
        assert seasonal_period(Frequency.HALF_HOURLY) == 48

    def test_total_over_enum(self):
        for freq in Frequency:
            assert seasonal_period(freq) == EXPECTED_PERIODS[freq] >= 1


class TestFrequencyFromString:
    def test_case_insensitive(self):
        assert frequency_from_string("Yearly") is Frequency.YEARLY

    def test_four_seconds_spelling(self):
        assert frequency_from_string("4_seconds") is Frequency.FOUR_SECONDS

    def test_half_hourly_with_hyphen(self):
        assert frequency_from_string("Half-Hourly") is Frequency.HALF_HOURLY

    def test_unknown(self):
        with pytest.raises(UnknownFrequency):
            frequency_from_string("fortnightly")


class TestDefaultHorizon:
    @pytest.mark.parametrize("name,freq,expected", HORIZON_TABLE)
    def test_full_table(self, name, freq, expected):
        assert default_horizon(name, Frequency(freq)) == expected
        assert default_horizon(name, strict=True) == expected

    def test_m1_yearly(self):
        assert default_horizon("M1 yearly", Frequency.YEARLY) == 6

    def test_tourism_monthly(self):
        assert default_horizon("Tourism Monthly", Frequency.MONTHLY) == 24

    def test_frequency_fallback(self):
        assert default_horizon("unknown", Frequency.QUARTERLY) == 8
        assert default_horizon("unknown", Frequency.YEARLY) == 6
        assert default_horizon("unknown", Frequency.DAILY) == 30

    def test_strict_unknown_raises(self):
        with pytest.raises(UnknownDataset):
            default_horizon("unknown", Frequency.QUARTERLY, strict=True)

    def test_no_fallback_for_exotic_frequency(self):
        with pytest.raises(UnknownDataset):
            default_horizon("unknown", Frequency.FOUR_SECONDS)

    def test_canonicalization_of_monash_file_stems(self):
        assert canonical_dataset_name("m1_yearly_dataset") == "m1_yearly"
        assert canonical_dataset_name("kdd_cup_2018_dataset_without_missing_values") == "kdd_cup_2018"
        assert default_horizon("m1_yearly_dataset", strict=True) == 6
        assert default_horizon("nn5_weekly_dataset", strict=True) == 8


class TestTimeSeries:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            make_series([])

    def test_rejects_infinite(self):
        with pytest.raises(ValueError):
            make_series([1.0, np.inf])

    def test_missing_marker_allowed(self):
        ts = make_series([1.0, np.nan, 3.0])
        assert ts.has_missing

    def test_values_are_immutable(self):
        ts = make_series([1.0, 2.0])
        with pytest.raises(ValueError):
            ts.values[0] = 5.0


class TestLocf:
    def test_fills_forward(self):
        out = locf(np.array([1.0, np.nan, np.nan, 4.0]))
        assert out.tolist() == [1.0, 1.0, 1.0, 4.0]

    def test_leading_missing_backfilled(self):
        out = locf(np.array([np.nan, np.nan, 3.0, np.nan]))
        assert out.tolist() == [3.0, 3.0, 3.0, 3.0]

    def test_all_missing_raises(self):
        with pytest.raises(EmptyInput):
            locf(np.array([np.nan, np.nan]))


class TestTemporalSplit:
    def test_suffix_split(self):
        train, test = temporal_train_test_split(make_series([1, 2, 3, 4, 5]), 2)
        assert train.values.tolist() == [1, 2, 3]
        assert test.values.tolist() == [4, 5]

    def test_degenerate_raises(self):
        with pytest.raises(SeriesTooShort):
            temporal_train_test_split(make_series([1]), 1)

    def test_single_step(self):
        train, test = temporal_train_test_split(make_series([10, 20, 30]), 1)
        assert train.values.tolist() == [10, 20]
        assert test.values.tolist() == [30]

    @given(
        values=st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=60),
        data=st.data(),
    )
    @settings(max_examples=200, deadline=None)
    def test_concatenation_reconstructs(self, values, data):
        h = data.draw(st.integers(1, len(values) - 1))
        series = make_series(values)
        train, test = temporal_train_test_split(series, h)
        assert len(train) + len(test) == len(series)
        assert len(test) == h
        recombined = np.concatenate([train.values, test.values])
        np.testing.assert_array_equal(recombined, series.values)


class TestDataset:
    def test_frequency_mismatch_rejected(self):
        good = make_series([1, 2, 3], frequency=Frequency.YEARLY)
        bad = make_series([1, 2, 3], frequency=Frequency.MONTHLY)
        with pytest.raises(ValueError):
            Dataset("d", (good, bad), Frequency.YEARLY, 2)

    def test_equal_length_flag_enforced(self):
        a = make_series([1, 2, 3])
        b = make_series([1, 2])
        with pytest.raises(ValueError):
            Dataset("d", (a, b), Frequency.YEARLY, 1, equal_length=True)

    def test_table_is_self_consistent(self):
        # every canonical key must already be in canonical form
        for key in DATASET_HORIZONS:
            assert canonical_dataset_name(key) == key


def test_four_seconds_alias():
    assert frequency_from_string("four_seconds") is Frequency.FOUR_SECONDS
