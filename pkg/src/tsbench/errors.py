"""Exception hierarchy shared across the toolkit.

Forecaster failures (subclasses of :class:`ForecastError`) are "declared"
errors: the evaluation harness converts them into NA records instead of
propagating. Everything else signals misuse or broken inputs and is raised
normally.
"""

from __future__ import annotations


class TsbenchError(Exception):
    """Base class for all toolkit errors."""


# --- forecaster / data errors (harness converts these to NA records) ---


class ForecastError(TsbenchError):
    """Base class for declared forecaster failures."""


class SeriesTooShort(ForecastError):
    pass


class PeriodTooSmall(ForecastError):
    pass


class NonPositiveData(ForecastError):
    pass


class NonConvergence(ForecastError):
    """Optimizer failure; carries a diagnostic message."""


class NonFinitePrediction(ForecastError):
    pass


class SingularDesign(ForecastError):
    pass


class ZeroDenominator(ForecastError):
    """MASE scaling denominator is exactly zero (constant-at-lag-m train)."""


# --- parser errors ---


class MissingDataSection(TsbenchError):
    pass


class AttributeCountMismatch(TsbenchError):
    def __init__(self, line_no: int, message: str = ""):
        self.line_no = line_no
        super().__init__(message or f"attribute count mismatch on line {line_no}")


class UnparsableValue(TsbenchError):
    def __init__(self, line_no: int, column: int, message: str = ""):
        self.line_no = line_no
        self.column = column
        super().__init__(message or f"unparsable value on line {line_no}, column {column}")


class UnknownFrequency(TsbenchError):
    pass


class UnknownDataset(TsbenchError):
    pass


# --- metric errors ---


class LengthMismatch(TsbenchError):
    pass


class EmptyInput(TsbenchError):
    pass


class InvalidQuantile(TsbenchError):
    pass


# --- statistics errors ---


class DegenerateInput(TsbenchError):
    pass


class InvalidP(TsbenchError):
    pass


class AllDifferencesZero(TsbenchError):
    pass


class ZeroVariance(TsbenchError):
    pass


# --- harness / tuning / reporting errors ---


class DatasetLoadError(TsbenchError):
    pass


class AllTrialsFailed(TsbenchError):
    pass


class ManifestNotFound(TsbenchError):
    pass


class MetricAbsent(TsbenchError):
    pass


class ConfigError(TsbenchError):
    pass
