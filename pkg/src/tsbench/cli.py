"""Command-line entry point: run benchmarks, tune methods, emit reports.

Exit codes: 0 success, 1 configuration error, 2 dataset load error.
Dataset paths in the config resolve against the config file's directory,
then against TSBENCH_DATA_DIR.
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from tsbench.core import locf, seasonal_period, temporal_train_test_split
from tsbench.errors import (
    AllTrialsFailed,
    ConfigError,
    DatasetLoadError,
    DegenerateInput,
    ManifestNotFound,
    MetricAbsent,
    TsbenchError,
)
from tsbench.forecasters import METHODS, ForecasterSpec, fit
from tsbench.harness import BenchmarkConfig, EvaluationRecord, evaluate, load_dataset, run_benchmark
from tsbench.manifest import (
    Manifest,
    TuningEntry,
    config_hash,
    read_manifest,
    write_manifest,
)
from tsbench.metrics import aggregate, parse_metric, score
from tsbench.report import (
    load_dataset_groups,
    rank_report,
    write_cd_diagram_svg,
    write_group_summary_csv,
    write_rank_json,
    write_rescaled_csv,
    write_wins_losses_csv,
)
from tsbench.tuning import DEFAULT_SEARCH_SPACES, Pipeline, pipeline_fit_predict, tune_dataset

DATA_DIR_ENV = "TSBENCH_DATA_DIR"


def _load_config(path: str) -> tuple[dict[str, Any], bytes]:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    raw = p.read_bytes()
    try:
        return tomllib.loads(raw.decode("utf-8")), raw
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot parse config {p}: {exc}") from exc


def _resolve_dataset_path(entry: str, config_dir: Path) -> str:
    candidate = Path(entry)
    if candidate.is_absolute():
        return str(candidate)
    local = config_dir / candidate
    if local.exists():
        return str(local)
    data_dir = os.environ.get(DATA_DIR_ENV)
    if data_dir:
        under_env = Path(data_dir) / candidate
        if under_env.exists():
            return str(under_env)
    return str(local)


def _parse_methods(doc: dict[str, Any]) -> list[ForecasterSpec]:
    entries = doc.get("methods")
    if not entries:
        raise ConfigError("config declares no [[methods]] entries")
    specs: list[ForecasterSpec] = []
    for entry in entries:
        if "method" not in entry:
            raise ConfigError(f"methods entry missing 'method': {entry}")
        method = entry["method"]
        if method not in METHODS:
            raise ConfigError(f"unknown method {method!r}; known: {METHODS}")
        params = dict(entry.get("params", {}))
        specs.append(ForecasterSpec(method, params, entry.get("name")))
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ConfigError(f"method names must be unique, got {names}")
    return specs


def _benchmark_config(doc: dict[str, Any], config_dir: Path, args: argparse.Namespace) -> BenchmarkConfig:
    datasets = doc.get("datasets")
    if not datasets:
        raise ConfigError("config declares no datasets")
    if getattr(args, "datasets", None):
        wanted = set(args.datasets.split(","))
        datasets = [d for d in datasets if Path(d).stem in wanted or d in wanted]
        if not datasets:
            raise ConfigError(f"--datasets filter {args.datasets!r} matched nothing")
    specs = _parse_methods(doc)
    if getattr(args, "methods", None):
        wanted = set(args.methods.split(","))
        specs = [s for s in specs if s.name in wanted]
        if not specs:
            raise ConfigError(f"--methods filter {args.methods!r} matched nothing")
    metrics = doc.get("metrics", ["smape", "mase"])
    if getattr(args, "metrics", None):
        metrics = args.metrics.split(",")
    budget = float(doc.get("budget_seconds", 3600.0))
    if getattr(args, "budget", None) is not None:
        budget = float(args.budget)
    parallelism = int(doc.get("parallelism", 1))
    try:
        return BenchmarkConfig(
            datasets=tuple(_resolve_dataset_path(d, config_dir) for d in datasets),
            methods=tuple(specs),
            metrics=tuple(metrics),
            budget_seconds=budget,
            parallelism=parallelism,
        )
    except (ValueError, TsbenchError) as exc:
        raise ConfigError(str(exc)) from exc


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def cmd_run(args: argparse.Namespace) -> int:
    doc, raw = _load_config(args.config)
    config = _benchmark_config(doc, Path(args.config).resolve().parent, args)
    records = run_benchmark(config)
    manifest = Manifest(records=tuple(records), config_hash=config_hash(raw), created=_utc_now())
    write_manifest(manifest, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _imputed(ts):
    return ts if not ts.has_missing else ts.with_values(locf(ts.values))


def _tune_one_dataset(dataset, spec: ForecasterSpec, space, n_iter: int, seed: int, scoring: str, pipe: Pipeline):
    """Dataset-level search over the per-series training segments.

    Missing values are imputed the same way the harness does before the
    temporal split, so tuning sees the data the forecasters will see.
    """
    sp = seasonal_period(dataset.frequency)
    trains = [temporal_train_test_split(_imputed(ts), dataset.horizon)[0] for ts in dataset.series]
    return tune_dataset(
        trains,
        dataset.horizon,
        spec.with_default_sp(sp),
        space,
        n_iter=n_iter,
        seed=seed,
        scoring=scoring,
        pipeline=pipe if (pipe.standardize or pipe.boxcox) else None,
        mase_m=sp,
    )


def cmd_tune(args: argparse.Namespace) -> int:
    doc, raw = _load_config(args.config)
    tune_doc = doc.get("tune")
    if not tune_doc or "method" not in tune_doc:
        raise ConfigError("config needs a [tune] section naming a method")
    method = tune_doc["method"]
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; known: {METHODS}")
    if method not in DEFAULT_SEARCH_SPACES and "space" not in tune_doc:
        raise ConfigError(f"no default search space for {method!r}; give [tune.space]")
    space = tune_doc.get("space", DEFAULT_SEARCH_SPACES.get(method, {}))
    if not space:
        raise ConfigError(f"empty search space for {method!r}")
    n_iter = int(tune_doc.get("n_iter", 20))
    seed = int(tune_doc.get("seed", 0))
    scoring = tune_doc.get("scoring", "smape")
    try:
        parse_metric(scoring)
    except TsbenchError as exc:
        raise ConfigError(f"bad scoring metric: {exc}") from exc
    pipe = Pipeline(
        inner=ForecasterSpec(method),
        standardize=bool(tune_doc.get("standardize", False)),
        boxcox=bool(tune_doc.get("boxcox", False)),
        lam=tune_doc.get("lambda"),
    )
    config = _benchmark_config(doc, Path(args.config).resolve().parent, args)
    metrics = config.metrics

    datasets = [load_dataset(p) for p in config.datasets]
    records: list[EvaluationRecord] = []
    entries: list[TuningEntry] = []
    base_spec = ForecasterSpec(method, dict(tune_doc.get("params", {})))
    for dataset in datasets:
        sp = seasonal_period(dataset.frequency)
        before = evaluate(base_spec, dataset, metrics, config.budget_seconds)
        records.append(before)
        try:
            result, best_spec = _tune_one_dataset(dataset, base_spec, space, n_iter, seed, scoring, pipe)
        except (AllTrialsFailed, TsbenchError) as exc:
            entries.append(TuningEntry(dataset.name, method, _empty_tuning(seed), before.scores, {}))
            print(f"tuning failed on {dataset.name}: {exc}", file=sys.stderr)
            continue
        after_scores = _score_tuned(dataset, best_spec, metrics, sp, pipe)
        entries.append(TuningEntry(dataset.name, method, result, before.scores, after_scores))
    manifest = Manifest(
        records=tuple(records), config_hash=config_hash(raw), created=_utc_now(), tuning=tuple(entries)
    )
    write_manifest(manifest, args.out)
    print(f"wrote tuning manifest for {len(datasets)} datasets to {args.out}")
    return 0


def _empty_tuning(seed: int):
    from tsbench.tuning import Trial, TuningResult

    return TuningResult(trials=(Trial(params={}, score=float("inf")),), best={}, best_score=float("inf"), seed=seed)


def _score_tuned(dataset, best_spec: ForecasterSpec, metrics, sp: int, pipe: Pipeline) -> dict[str, float]:
    """Refit the tuned configuration on each full train segment and score."""
    per_metric: dict[str, list[float]] = {m: [] for m in metrics}
    for ts in dataset.series:
        train, test = temporal_train_test_split(_imputed(ts), dataset.horizon)
        if pipe.standardize or pipe.boxcox:
            forecast = pipeline_fit_predict(
                Pipeline(best_spec, pipe.standardize, pipe.boxcox, pipe.lam), train, dataset.horizon
            )
        else:
            forecast = fit(best_spec, train).predict(dataset.horizon)
        for m in metrics:
            per_metric[m].append(score(m, test.values, forecast, train=train.values, m=sp))
    return {m: aggregate(v) for m, v in per_metric.items()}


def cmd_report(args: argparse.Namespace) -> int:
    manifest = read_manifest(getattr(args, "in"))
    records = list(manifest.records)
    metric = args.metric
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    groups = load_dataset_groups(args.groups) if args.groups else None
    write_wins_losses_csv(records, metric, out_dir / f"wins_losses_{metric}.csv")
    try:
        report = rank_report(records, metric, alpha=args.alpha)
    except DegenerateInput as exc:
        print(f"skipping rank report and CD diagram: {exc}", file=sys.stderr)
    else:
        write_rank_json(report, out_dir / f"ranks_{metric}.json")
        write_cd_diagram_svg(report, out_dir / f"cd_diagram_{metric}.svg")
    write_rescaled_csv(records, metric, out_dir / f"rescaled_{metric}.csv")
    write_group_summary_csv(records, metric, "frequency", out_dir / f"group_frequency_{metric}.csv", groups)
    write_group_summary_csv(records, metric, "domain", out_dir / f"group_domain_{metric}.csv", groups)
    print(f"wrote reports for metric {metric} to {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tsbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evaluate methods over datasets")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--budget", type=float, default=None, help="budget seconds per (dataset, method)")
    p_run.add_argument("--methods", default=None, help="comma-separated method filter")
    p_run.add_argument("--datasets", default=None, help="comma-separated dataset filter")
    p_run.add_argument("--metrics", default=None, help="comma-separated metric ids")
    p_run.set_defaults(func=cmd_run)

    p_tune = sub.add_parser("tune", help="random-search tuning for one method")
    p_tune.add_argument("--config", required=True)
    p_tune.add_argument("--out", required=True)
    p_tune.add_argument("--budget", type=float, default=None)
    p_tune.add_argument("--methods", default=None)
    p_tune.add_argument("--datasets", default=None)
    p_tune.add_argument("--metrics", default=None)
    p_tune.set_defaults(func=cmd_tune)

    p_rep = sub.add_parser("report", help="emit tables and diagrams from a manifest")
    p_rep.add_argument("--in", required=True)
    p_rep.add_argument("--metric", required=True)
    p_rep.add_argument("--out-dir", required=True)
    p_rep.add_argument("--alpha", type=float, default=0.05)
    p_rep.add_argument("--groups", default=None, help="override the bundled dataset-groups file")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (ManifestNotFound, MetricAbsent) as exc:
        print(f"report error: {exc}", file=sys.stderr)
        return 1
    except DatasetLoadError as exc:
        print(f"dataset error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
