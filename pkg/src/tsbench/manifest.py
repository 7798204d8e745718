"""Run manifest persistence: a single deterministic JSON document.

Scores and runtimes are serialized as 10-significant-digit decimal strings
so write -> read -> write round-trips are byte-identical across platforms.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from tsbench.errors import ManifestNotFound
from tsbench.harness import EvaluationRecord, Status
from tsbench.tuning import Trial, TuningResult

SCHEMA_VERSION = 1
TOOLKIT_VERSION = "0.1.0"


def format_score(x: float) -> str:
    return f"{float(x):.10g}"


def config_hash(text: bytes | str) -> str:
    data = text.encode("utf-8") if isinstance(text, str) else text
    return "sha256:" + hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class TuningEntry:
    dataset: str
    method: str
    result: TuningResult
    before_scores: Mapping[str, float]
    after_scores: Mapping[str, float]


@dataclass(frozen=True)
class Manifest:
    records: tuple[EvaluationRecord, ...]
    config_hash: str
    toolkit_version: str = TOOLKIT_VERSION
    created: str = ""
    tuning: tuple[TuningEntry, ...] = ()

    def __post_init__(self) -> None:
        keys = [(r.dataset, r.method) for r in self.records]
        if len(set(keys)) != len(keys):
            raise ValueError("manifest records must be uniquely keyed by (dataset, method)")

    def record_for(self, dataset: str, method: str) -> EvaluationRecord | None:
        for r in self.records:
            if r.dataset == dataset and r.method == method:
                return r
        return None

    @property
    def methods(self) -> tuple[str, ...]:
        seen: list[str] = []
        for r in self.records:
            if r.method not in seen:
                seen.append(r.method)
        return tuple(seen)

    @property
    def datasets(self) -> tuple[str, ...]:
        seen: list[str] = []
        for r in self.records:
            if r.dataset not in seen:
                seen.append(r.dataset)
        return tuple(seen)


def _record_to_json(record: EvaluationRecord) -> dict[str, Any]:
    return {
        "dataset": record.dataset,
        "method": record.method,
        "status": record.status.value,
        "na_reason": record.na_reason,
        "runtime_seconds": format_score(record.runtime_seconds),
        "series_evaluated": record.series_evaluated,
        "scores": {k: format_score(v) for k, v in sorted(record.scores.items())},
    }


def _record_from_json(obj: Mapping[str, Any]) -> EvaluationRecord:
    return EvaluationRecord(
        dataset=obj["dataset"],
        method=obj["method"],
        scores={k: float(v) for k, v in obj["scores"].items()},
        status=Status(obj["status"]),
        na_reason=obj.get("na_reason"),
        runtime_seconds=float(obj["runtime_seconds"]),
        series_evaluated=int(obj["series_evaluated"]),
    )


def _tuning_to_json(entry: TuningEntry) -> dict[str, Any]:
    return {
        "dataset": entry.dataset,
        "method": entry.method,
        "seed": entry.result.seed,
        "trials": [
            {"params": dict(t.params), "score": format_score(t.score)} for t in entry.result.trials
        ],
        "best": dict(entry.result.best),
        "best_score": format_score(entry.result.best_score),
        "before_scores": {k: format_score(v) for k, v in sorted(entry.before_scores.items())},
        "after_scores": {k: format_score(v) for k, v in sorted(entry.after_scores.items())},
    }


def _tuning_from_json(obj: Mapping[str, Any]) -> TuningEntry:
    trials = tuple(Trial(params=dict(t["params"]), score=float(t["score"])) for t in obj["trials"])
    result = TuningResult(
        trials=trials, best=dict(obj["best"]), best_score=float(obj["best_score"]), seed=int(obj["seed"])
    )
    return TuningEntry(
        dataset=obj["dataset"],
        method=obj["method"],
        result=result,
        before_scores={k: float(v) for k, v in obj["before_scores"].items()},
        after_scores={k: float(v) for k, v in obj["after_scores"].items()},
    )


def write_manifest(manifest: Manifest, path: str | Path) -> None:
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "toolkit_version": manifest.toolkit_version,
        "config_hash": manifest.config_hash,
        "created": manifest.created,
        "records": [_record_to_json(r) for r in manifest.records],
    }
    if manifest.tuning:
        doc["tuning"] = [_tuning_to_json(t) for t in manifest.tuning]
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def read_manifest(path: str | Path) -> Manifest:
    p = Path(path)
    if not p.exists():
        raise ManifestNotFound(str(p))
    doc = json.loads(p.read_text(encoding="utf-8"))
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ManifestNotFound(f"{p}: unsupported schema version {doc.get('schema_version')}")
    return Manifest(
        records=tuple(_record_from_json(r) for r in doc["records"]),
        config_hash=doc["config_hash"],
        toolkit_version=doc["toolkit_version"],
        created=doc["created"],
        tuning=tuple(_tuning_from_json(t) for t in doc.get("tuning", ())),
    )
