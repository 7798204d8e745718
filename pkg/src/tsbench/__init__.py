"""tsbench: a benchmark toolkit for classical time-series forecasting."""

from tsbench.core import (
    Dataset,
    Frequency,
    TimeSeries,
    default_horizon,
    frequency_from_string,
    locf,
    seasonal_period,
    temporal_train_test_split,
)
from tsbench.forecasters import ForecasterSpec, fit, fit_predict
from tsbench.harness import BenchmarkConfig, EvaluationRecord, Status, evaluate, run_benchmark
from tsbench.metrics import aggregate, mase, quantile_loss, rmse, smape
from tsbench.tsf import parse_tsf, write_tsf

__version__ = "0.1.0"

__all__ = [
    "BenchmarkConfig",
    "Dataset",
    "EvaluationRecord",
    "ForecasterSpec",
    "Frequency",
    "Status",
    "TimeSeries",
    "__version__",
    "aggregate",
    "default_horizon",
    "evaluate",
    "fit",
    "fit_predict",
    "frequency_from_string",
    "locf",
    "mase",
    "parse_tsf",
    "quantile_loss",
    "rmse",
    "run_benchmark",
    "seasonal_period",
    "smape",
    "temporal_train_test_split",
    "write_tsf",
]
