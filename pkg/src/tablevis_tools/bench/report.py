#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Benchmark reports: per-instance rows, dimension means, failures and the data length histogram.

The mean Score is the mean of the per-instance Scores. The aggregate of the dimension means is reported next
to it as `score_of_means`; the two differ whenever some instances have no AA score.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, computed_field

from tablevis_tools.core import consts
from tablevis_tools.judge import aggregate_score
from tablevis_tools.tables import TableGrid, count_data_points, serialize_markdown
from tablevis_tools.utils.serialization import dumps_document

if TYPE_CHECKING:
    from tablevis_tools.bench.dataset import BenchDataset
    from tablevis_tools.judge import DimensionScores

ReportFormat = Literal["json", "markdown"]
FailureStage = Literal["pipeline", "evaluation", "reference"]

REPORT_COLUMNS = ("DA", "TR", "RR", "AA", "AQ", "Score")


class InstanceFailure(BaseModel):
    """A benchmark instance that produced no scores."""

    model_config = ConfigDict(frozen=True)

    instance_id: str
    stage: FailureStage
    error_type: str
    message: str


class InstanceRow(BaseModel):
    """Scores of one benchmark instance."""

    model_config = ConfigDict(frozen=True)

    instance_id: str
    n_total: int
    da: float
    tr: float
    rr: float
    aa: float | None = None
    aq: float
    score: float
    round_scores: tuple[float, ...] = ()
    """Score after each round, starting with the initial image. Empty unless per-round scoring ran."""

    @classmethod
    def from_scores(
        cls, instance_id: str, n_total: int, scores: DimensionScores, round_scores: tuple[float, ...] = ()
    ) -> InstanceRow:
        """Flattens evaluated scores into a row."""
        return cls(
            instance_id=instance_id,
            n_total=n_total,
            da=scores.da,
            tr=scores.tr,
            rr=scores.rr,
            aa=scores.aa,
            aq=scores.aq,
            score=scores.score,
            round_scores=round_scores,
        )


class DimensionMeans(BaseModel):
    """Per-dimension means. AA is averaged over the instances that have it."""

    model_config = ConfigDict(frozen=True)

    da: float
    tr: float
    rr: float
    aa: float | None
    aq: float
    score: float


class HistogramBucket(BaseModel):
    """Number of instances whose data point count falls in `[lower, upper)`. The last bucket has no upper bound."""

    model_config = ConfigDict(frozen=True)

    label: str
    lower: int
    upper: int | None
    count: int


def _frame(rows: tuple[InstanceRow, ...]) -> pd.DataFrame:
    return pd.DataFrame(
        [row.model_dump(exclude={"round_scores"}) for row in rows],
        columns=["instance_id", "n_total", "da", "tr", "rr", "aa", "aq", "score"],
    ).astype({"aa": "float64"})


class BenchReport(BaseModel):
    """Outcome of a benchmark run."""

    model_config = ConfigDict(frozen=True)

    rows: tuple[InstanceRow, ...] = ()
    failures: tuple[InstanceFailure, ...] = ()
    histogram: tuple[HistogramBucket, ...] = ()

    @computed_field  # type: ignore[prop-decorator]
    @property
    def means(self) -> DimensionMeans | None:
        """Per-dimension means, or `None` for a report without rows."""
        if not self.rows:
            return None
        means = _frame(self.rows)[["da", "tr", "rr", "aa", "aq", "score"]].mean(skipna=True)
        aa = float(means["aa"])
        return DimensionMeans(
            da=float(means["da"]),
            tr=float(means["tr"]),
            rr=float(means["rr"]),
            aa=None if math.isnan(aa) else aa,
            aq=float(means["aq"]),
            score=float(means["score"]),
        )

    @computed_field  # type: ignore[prop-decorator]
    @property
    def mean_score(self) -> float | None:
        """Mean of the per-instance Scores."""
        return None if self.means is None else self.means.score

    @computed_field  # type: ignore[prop-decorator]
    @property
    def score_of_means(self) -> float | None:
        """The Score aggregate applied to the dimension means."""
        means = self.means
        if means is None:
            return None
        return aggregate_score(means.da, means.tr, means.rr, means.aa, means.aq)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def round_means(self) -> list[float]:
        """Mean Score per round index over the instances scored per round."""
        per_round = [row.round_scores for row in self.rows if row.round_scores]
        if not per_round:
            return []
        width = min(len(scores) for scores in per_round)
        return [float(value) for value in np.mean([scores[:width] for scores in per_round], axis=0)]

    @property
    def ok(self) -> bool:
        """Whether every instance was scored."""
        return not self.failures


def histogram_labels() -> list[tuple[str, int, int | None]]:
    """Histogram buckets as `(label, lower, upper)`."""
    width, overflow = consts.pipeline.HISTOGRAM_BUCKET_WIDTH, consts.pipeline.HISTOGRAM_OVERFLOW
    buckets: list[tuple[str, int, int | None]] = [("1-5", 0, width)]
    buckets.extend((f"{lower}-{lower + width}", lower, lower + width) for lower in range(width, overflow, width))
    buckets.append((f"{overflow}+", overflow, None))
    return buckets


def histogram(counts: list[int]) -> tuple[HistogramBucket, ...]:
    """Buckets data point counts. Counts of zero land in the first bucket.

    Args:
        counts: Data point count per instance.

    Returns:
        The buckets in ascending order. Their counts sum to `len(counts)`.

    """
    buckets = histogram_labels()
    edges = [-math.inf, *(lower for _, lower, _ in buckets[1:]), math.inf]
    labels = [label for label, _, _ in buckets]
    binned = pd.cut(pd.Series(counts, dtype="int64"), bins=edges, right=False, labels=labels)
    totals = binned.value_counts().reindex(labels, fill_value=0)
    return tuple(
        HistogramBucket(label=label, lower=lower, upper=upper, count=int(totals[label]))
        for label, lower, upper in buckets
    )


def stats(dataset: BenchDataset) -> tuple[HistogramBucket, ...]:
    """Data length distribution of a dataset."""
    return histogram([count_data_points(instance.grid) for instance in dataset.instances])


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:.1f}"


def _delta(value: float | None, base: float | None) -> str:
    if value is None or base is None:
        return "-"
    return f"{value - base:+.1f}"


def _markdown(report: BenchReport, baseline: BenchReport | None) -> str:
    body: list[list[str]] = []
    means = report.means
    if means is not None:
        values = [means.da, means.tr, means.rr, means.aa, means.aq, means.score]
        body.append(["Mean", *(_fmt(value) for value in values)])
        base = baseline.means if baseline is not None else None
        if base is not None:
            base_values = [base.da, base.tr, base.rr, base.aa, base.aq, base.score]
            body.append(["Improvement", *(_delta(v, b) for v, b in zip(values, base_values, strict=True))])
    tables = [serialize_markdown(TableGrid.of(["Run", *REPORT_COLUMNS], body))]

    if report.round_means:
        rounds = [[str(idx), _fmt(value)] for idx, value in enumerate(report.round_means)]
        tables.append(serialize_markdown(TableGrid.of(["Round", "Score"], rounds)))
    if report.failures:
        failures = [[f.instance_id, f.stage, f"{f.error_type}: {' '.join(f.message.split())}"] for f in report.failures]
        tables.append(serialize_markdown(TableGrid.of(["Failed instance", "Stage", "Error"], failures)))
    return "\n\n".join(tables) + "\n"


def emit_report(report: BenchReport, fmt: ReportFormat, baseline: BenchReport | None = None) -> str:
    """Renders a report.

    Args:
        report: The report.
        fmt: `markdown` renders the mean row at one decimal, `json` the full report at full precision.
        baseline: Optional baseline report. The markdown form then gets an Improvement row with the
            per-column difference.

    Returns:
        The rendered document.

    """
    if fmt == "json":
        return dumps_document(report.model_dump(mode="json"))
    return _markdown(report, baseline)


def load_report(text: str) -> BenchReport:
    """Reads a report back from its json form."""
    return BenchReport.model_validate_json(text)
