#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

import json

import numpy as np
import pytest

from tablevis_tools.bench import BenchReport, InstanceFailure, InstanceRow, emit_report, histogram, load_report
from tablevis_tools.core import consts

_HEADER = "| Run | DA | TR | RR | AA | AQ | Score |\n| --- | --- | --- | --- | --- | --- | --- |"


def _row(instance_id: str, da: float, tr: float, rr: float, aa: float | None, aq: float) -> InstanceRow:
    terms = [da, tr, rr] + ([] if aa is None else [aa]) + [10 * aq]
    return InstanceRow(
        instance_id=instance_id, n_total=4, da=da, tr=tr, rr=rr, aa=aa, aq=aq, score=sum(terms) / len(terms)
    )


def test_mean_row_is_rounded_to_one_decimal() -> None:
    report = BenchReport(rows=(_row("t1", 97.7, 99.5, 86.4, 96.6, 4.2),))
    assert emit_report(report, "markdown") == _HEADER + "\n| Mean | 97.7 | 99.5 | 86.4 | 96.6 | 4.2 | 84.4 |\n"


def test_empty_report_renders_the_header_only() -> None:
    report = BenchReport()
    assert emit_report(report, "markdown") == _HEADER + "\n"
    assert report.means is None
    assert report.mean_score is None
    assert report.ok


def test_aa_is_averaged_over_instances_that_have_it() -> None:
    report = BenchReport(rows=(_row("t1", 80.0, 80.0, 80.0, 60.0, 8.0), _row("t2", 60.0, 60.0, 60.0, None, 6.0)))
    assert report.means is not None
    assert report.means.aa == pytest.approx(60.0)
    assert report.mean_score == pytest.approx((76.0 + 60.0) / 2)
    assert report.score_of_means == pytest.approx((70.0 + 70.0 + 70.0 + 60.0 + 70.0) / 5)


def test_missing_aa_renders_a_dash() -> None:
    report = BenchReport(rows=(_row("t1", 50.0, 50.0, 50.0, None, 5.0),))
    assert "| Mean | 50.0 | 50.0 | 50.0 | - | 5.0 | 50.0 |" in emit_report(report, "markdown")


def test_improvement_row_against_a_baseline() -> None:
    report = BenchReport(rows=(_row("t1", 52.4, 82.9, 54.3, 40.0, 4.5),))
    baseline = BenchReport(rows=(_row("t1", 47.5, 90.9, 26.1, 14.1, 4.3),))
    text = emit_report(report, "markdown", baseline)
    assert "| Improvement | +4.9 | -8.0 | +28.2 | +25.9 | +0.2 | +10.6 |" in text


def test_round_and_failure_tables() -> None:
    row = _row("t1", 90.0, 90.0, 90.0, 90.0, 9.0).model_copy(update={"round_scores": (80.0, 85.0, 90.0, 90.0)})
    failure = InstanceFailure(instance_id="t2", stage="pipeline", error_type="PipelineRunError", message="boom\nagain")
    text = emit_report(BenchReport(rows=(row,), failures=(failure,)), "markdown")
    tables = text.rstrip("\n").split("\n\n")
    assert len(tables) == 3  # noqa: PLR2004
    assert tables[1].splitlines()[2:] == ["| 0 | 80.0 |", "| 1 | 85.0 |", "| 2 | 90.0 |", "| 3 | 90.0 |"]
    assert tables[2].splitlines()[2] == "| t2 | pipeline | PipelineRunError: boom again |"


def test_round_means() -> None:
    rows = tuple(
        _row(f"t{idx}", 90.0, 90.0, 90.0, None, 9.0).model_copy(update={"round_scores": scores})
        for idx, scores in enumerate([(60.0, 70.0), (80.0, 90.0)])
    )
    assert BenchReport(rows=rows).round_means == pytest.approx([70.0, 80.0])


def test_json_round_trip_renders_identical_markdown() -> None:
    report = BenchReport(
        rows=(_row("t1", 97.7, 99.5, 86.4, 96.6, 4.2), _row("t2", 12.1, 46.7, 28.9, None, 4.0)),
        failures=(InstanceFailure(instance_id="t3", stage="evaluation", error_type="EvaluationError", message="x"),),
        histogram=histogram([1, 7]),
    )
    text = emit_report(report, "json")
    assert json.loads(text)["mean_score"] == pytest.approx(report.mean_score)
    restored = load_report(text)
    assert restored == report
    assert emit_report(restored, "markdown") == emit_report(report, "markdown")


def test_histogram_buckets() -> None:
    buckets = histogram([0, 1, 4, 5, 9, 10, 39, 40, 100])
    counts = {b.label: b.count for b in buckets}
    assert counts["1-5"] == 3  # noqa: PLR2004
    assert counts["5-10"] == 2  # noqa: PLR2004
    assert counts["10-15"] == 1
    assert counts["35-40"] == 1
    assert counts["40+"] == 2  # noqa: PLR2004
    assert buckets[-1].upper is None


def test_histogram_partitions_random_counts() -> None:
    rng = np.random.default_rng(consts.reproducibility.SEED)
    counts = [int(c) for c in rng.integers(0, 80, size=500)]
    buckets = histogram(counts)
    assert sum(b.count for b in buckets) == len(counts)
    for bucket in buckets:
        upper = bucket.upper if bucket.upper is not None else 10**9
        lower = bucket.lower
        assert bucket.count == sum(1 for c in counts if lower <= c < upper)
