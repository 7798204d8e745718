import json

import numpy as np
import pytest

from tsbench.errors import ManifestNotFound, MetricAbsent
from tsbench.harness import EvaluationRecord, Status
from tsbench.manifest import (
    Manifest,
    TuningEntry,
    config_hash,
    format_score,
    read_manifest,
    write_manifest,
)
from tsbench.ranking import SignificanceReport
from tsbench.report import (
    cd_diagram_svg,
    complete_matrix,
    group_summaries,
    load_dataset_groups,
    rank_report,
    wins_losses_table,
    write_cd_diagram_svg,
    write_rank_json,
    write_rescaled_csv,
    write_wins_losses_csv,
)
from tsbench.tuning import Trial, TuningResult


def ok(dataset, method, **scores):
    return EvaluationRecord(dataset, method, scores, Status.OK, None, 0.25, 3)


def na(dataset, method, reason="NonPositiveData: x"):
    return EvaluationRecord(dataset, method, {}, Status.NA, reason, 0.1, 0)


RECORDS = [
    ok("d1", "naive", smape=0.2, mase=1.1),
    ok("d1", "trend", smape=0.4, mase=2.2),
    ok("d2", "naive", smape=0.3, mase=1.0),
    ok("d2", "trend", smape=0.1, mase=0.9),
    ok("d3", "naive", smape=0.5, mase=1.5),
    na("d3", "trend"),
]


class TestManifest:
    def test_round_trip_is_byte_identical(self, tmp_path):
        manifest = Manifest(
            records=tuple(RECORDS),
            config_hash=config_hash(b"demo config"),
            created="2025-01-02T03:04:05Z",
            tuning=(
                TuningEntry(
                    "d1",
                    "naive",
                    TuningResult((Trial({"strategy": "last"}, 0.125),), {"strategy": "last"}, 0.125, 7),
                    {"smape": 0.2},
                    {"smape": 0.19},
                ),
            ),
        )
        p1 = tmp_path / "m1.json"
        p2 = tmp_path / "m2.json"
        write_manifest(manifest, p1)
        write_manifest(read_manifest(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_duplicate_keys_rejected(self):
        with pytest.raises(ValueError):
            Manifest(records=(ok("d", "m", smape=0.1), ok("d", "m", smape=0.2)), config_hash="x")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ManifestNotFound):
            read_manifest(tmp_path / "absent.json")

    def test_format_score_ten_significant_digits(self):
        assert format_score(0.12345678949) == "0.1234567895"
        assert format_score(1234567890123.0) == "1.23456789e+12"
        # formatting is idempotent through a parse cycle
        for x in (0.1, 1 / 3, 2.0e13, 4.8943):
            assert format_score(float(format_score(x))) == format_score(x)

    def test_methods_and_datasets_ordered(self):
        manifest = Manifest(records=tuple(RECORDS), config_hash="h")
        assert manifest.methods == ("naive", "trend")
        assert manifest.datasets == ("d1", "d2", "d3")


class TestReportTables:
    def test_complete_matrix_drops_incomplete_rows(self):
        m = complete_matrix(RECORDS, "smape")
        assert m.datasets == ("d1", "d2")  # d3 lost trend

    def test_metric_absent(self):
        with pytest.raises(MetricAbsent):
            complete_matrix(RECORDS, "rmse")

    def test_wins_losses_table(self):
        table = wins_losses_table(RECORDS, "smape")
        assert table["naive"].wins == 2  # d1 and d3
        assert table["trend"].wins == 1  # d2
        assert table["trend"].failures == 1  # d3

    def test_wins_losses_csv(self, tmp_path):
        path = tmp_path / "wl.csv"
        write_wins_losses_csv(RECORDS, "smape", path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "method,wins,losses,ties,failures"
        assert "naive,2,1,0,0" in lines

    def test_rescaled_csv(self, tmp_path):
        path = tmp_path / "rs.csv"
        write_rescaled_csv(RECORDS, "smape", path)
        rows = path.read_text().strip().splitlines()
        assert rows[0] == "dataset,naive,trend"
        assert rows[1] == "d1,0,1"
        assert rows[2] == "d2,1,0"


class TestGroupSummaries:
    def test_sample_std_and_mean(self):
        records = [
            ok("m1_yearly", "naive", smape=0.2243),
            ok("m3_yearly", "naive", smape=0.1788),
            ok("m4_yearly", "naive", smape=0.1634),
            ok("tourism_yearly", "naive", smape=0.4217),
        ]
        table = group_summaries(records, "smape", "frequency")
        mean, std, count = table[("yearly", "naive")]
        assert count == 4
        assert mean == pytest.approx(np.mean([0.2243, 0.1788, 0.1634, 0.4217]), rel=1e-12)
        assert std == pytest.approx(np.std([0.2243, 0.1788, 0.1634, 0.4217], ddof=1), rel=1e-12)

    def test_domain_grouping(self):
        records = [ok("nn5_weekly", "naive", smape=0.1), ok("nn5_daily", "naive", smape=0.3)]
        table = group_summaries(records, "smape", "domain")
        assert table[("banking", "naive")][0] == pytest.approx(0.2)

    def test_unknown_datasets_skipped(self):
        records = [ok("mystery", "naive", smape=0.1)]
        assert group_summaries(records, "smape", "frequency") == {}

    def test_bundled_mapping_covers_benchmark(self):
        groups = load_dataset_groups()
        assert groups["m1_yearly"]["frequency"] == "yearly"
        assert groups["saugeen_river_flow"]["domain"] == "nature"
        assert len(groups) >= 38


class TestCdDiagram:
    def _report(self):
        return SignificanceReport(
            methods=("alpha", "beta", "gamma"),
            avg_rank=np.array([1.2, 2.1, 2.7]),
            friedman_statistic=8.0,
            friedman_p=0.018,
            pairwise={(0, 1): (0.01, 0.03), (0, 2): (0.02, 0.04), (1, 2): (0.5, 0.8)},
            cliques=((1, 2),),
            alpha=0.05,
        )

    def test_deterministic_bytes(self):
        a = cd_diagram_svg(self._report())
        b = cd_diagram_svg(self._report())
        assert a == b
        assert "<svg" in a and a.rstrip().endswith("</svg>")

    def test_one_clique_bar(self):
        svg = cd_diagram_svg(self._report())
        assert svg.count('class="clique"') == 1

    def test_no_bars_when_all_significant(self):
        report = self._report()
        report = SignificanceReport(
            methods=report.methods,
            avg_rank=report.avg_rank,
            friedman_statistic=report.friedman_statistic,
            friedman_p=report.friedman_p,
            pairwise=report.pairwise,
            cliques=(),
            alpha=0.05,
        )
        assert cd_diagram_svg(report).count('class="clique"') == 0

    def test_labels_present(self):
        svg = cd_diagram_svg(self._report())
        for name in ("alpha", "beta", "gamma"):
            assert name in svg

    def test_file_outputs(self, tmp_path):
        report = rank_report(RECORDS[:4], "smape")
        write_rank_json(report, tmp_path / "ranks.json")
        write_cd_diagram_svg(report, tmp_path / "cd.svg")
        doc = json.loads((tmp_path / "ranks.json").read_text())
        assert doc["methods"] == ["naive", "trend"]
        assert (tmp_path / "cd.svg").read_text().startswith("<svg")
