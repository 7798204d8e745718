#!/usr/bin/env python3
"""Reproduce the published per-dataset reference scores from real data.

Point TSBENCH_DATA_DIR (or pass a directory) at a folder of Monash `.tsf`
files; the script evaluates the deterministic reference targets and prints
an expected-vs-actual table with the pinned tolerances:

    m1_yearly      naive           smape 0.2243 +/- 0.003, mase 4.8943 +/- 0.02
    us_births      naive           smape 0.045  +/- 0.003
    nn5_weekly     naive           mase  1.0628 +/- 0.05
    m3_quarterly   exp_smoothing   smape 0.1082 +/- 15%
    m3_monthly     theta           smape 0.1442 +/- 15%

Missing files are reported and skipped. Exit code 1 if any check fails.

Usage: [TSBENCH_DATA_DIR=...] python scripts/reproduce_reference.py [data_dir]
"""

from __future__ import annotations

import os
import sys
import time
from pathlib import Path

from tsbench.core import canonical_dataset_name
from tsbench.forecasters import ForecasterSpec
from tsbench.harness import Status, evaluate, load_dataset

TARGETS = [
    ("m1_yearly", "naive", {}, {"smape": (0.2243, 0.003), "mase": (4.8943, 0.02)}),
    ("us_births", "naive", {}, {"smape": (0.045, 0.003)}),
    ("nn5_weekly", "naive", {}, {"mase": (1.0628, 0.05)}),
    ("m3_quarterly", "exp_smoothing", {}, {"smape": (0.1082, 0.15 * 0.1082)}),
    ("m3_monthly", "theta", {}, {"smape": (0.1442, 0.15 * 0.1442)}),
]


def find_file(root: Path, name: str) -> Path | None:
    want = canonical_dataset_name(name)
    for path in sorted(root.glob("*.tsf")):
        if canonical_dataset_name(path.stem) == want:
            return path
    return None


def main() -> int:
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(os.environ.get("TSBENCH_DATA_DIR", "data"))
    if not root.is_dir():
        print(f"data directory {root} does not exist; supply Monash .tsf files", file=sys.stderr)
        return 1
    failures = 0
    missing = 0
    for dataset_name, method, params, expectations in TARGETS:
        path = find_file(root, dataset_name)
        if path is None:
            print(f"MISSING  {dataset_name:<14} ({method}) - no matching .tsf under {root}")
            missing += 1
            continue
        dataset = load_dataset(path)
        metrics = tuple(expectations)
        start = time.time()
        record = evaluate(ForecasterSpec(method, params), dataset, metrics, budget_seconds=3600.0)
        elapsed = time.time() - start
        if record.status is not Status.OK:
            print(f"FAIL     {dataset_name:<14} {method:<14} -> {record.status.value} ({record.na_reason})")
            failures += 1
            continue
        for metric, (want, tol) in expectations.items():
            got = record.scores[metric]
            ok = abs(got - want) <= tol
            marker = "ok " if ok else "FAIL"
            print(
                f"{marker:<8} {dataset_name:<14} {method:<14} {metric:<6} "
                f"got {got:.4f}  want {want:.4f} +/- {tol:.4f}  [{elapsed:.1f}s]"
            )
            failures += 0 if ok else 1
    if missing:
        print(f"\n{missing} dataset file(s) missing; download the Monash archives and retry")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
