#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Deterministic dimension scores and the aggregate Score.

All dimension scores are on a 0-100 scale; the aesthetic score AQ stays on 0-10 and is scaled by 10 in the
aggregate. Scores are kept at full precision and only rounded when rendered.
"""

from __future__ import annotations

from statistics import fmean

from tablevis_tools.core import consts
from tablevis_tools.judge.reports import AaReport, DaReport, DimensionScores, RrReport, TrReport


def score_da(r: DaReport) -> float:
    """Share of correctly rendered data points.

    Examples:
        >>> score_da(DaReport(n_total=8, n_error=3))
        62.5

    """
    return 100.0 * (r.n_total - r.n_error) / r.n_total


def score_tr(r: TrReport) -> float:
    """Share of correctly rendered characters. An image without text scores 0."""
    if r.l_total == 0:
        return 0.0
    return 100.0 * (r.l_total - r.l_error) / r.l_total


def score_rr(r: RrReport) -> float:
    """Share of data points whose visual proportions are consistent with their values."""
    return 100.0 * (r.n_total - r.n_error) / r.n_total


def score_aa(r: AaReport) -> float | None:
    """Mean of the applicable label, alignment and mark sub-metrics, or `None` when none applies.

    Args:
        r: The report.

    Returns:
        The score, or `None` when the dimension does not apply to the image.

    """
    parts: list[float] = []
    if r.label_error_pct is not None:
        parts.append(1.0 - r.label_error_pct)
    if r.misaligned is not None:
        parts.append((r.misaligned.n_total - r.misaligned.n_misaligned) / r.misaligned.n_total)
    if r.mark_inappropriate_pct is not None:
        parts.append(1.0 - r.mark_inappropriate_pct)
    if not parts:
        return None
    return 100.0 * fmean(parts)


def aggregate_score(da: float, tr: float, rr: float, aa: float | None, aq: float) -> float:
    """Aggregates the dimension scores into the final Score.

    With AA present the Score is the mean of DA, TR, RR, AA and 10·AQ; without AA it is the mean of the
    remaining four terms.

    Args:
        da: Data accuracy, 0-100.
        tr: Text rendering, 0-100.
        rr: Relative relationship, 0-100.
        aa: Additional information accuracy, 0-100, or `None` when not applicable.
        aq: Aesthetic quality, 0-10.

    Returns:
        The Score, 0-100.

    Examples:
        >>> round(aggregate_score(97.7, 99.5, 86.4, 96.6, 4.2), 2)
        84.44

    """
    terms = [da, tr, rr] if aa is None else [da, tr, rr, aa]
    terms.append(consts.pipeline.AQ_SCALE * aq)
    return sum(terms) / len(terms)


def dimension_scores(da: DaReport, tr: TrReport, rr: RrReport, aa: AaReport | None, aq: float) -> DimensionScores:
    """Scores a set of reports.

    Args:
        da: Data accuracy report.
        tr: Text rendering report.
        rr: Relative relationship report.
        aa: Additional information report, `None` when its audit failed.
        aq: Aesthetic score, 0-10.

    Returns:
        The dimension scores with their aggregate.

    """
    da_score, tr_score, rr_score = score_da(da), score_tr(tr), score_rr(rr)
    aa_score = score_aa(aa) if aa is not None else None
    return DimensionScores(
        da=da_score,
        tr=tr_score,
        rr=rr_score,
        aa=aa_score,
        aq=aq,
        score=aggregate_score(da_score, tr_score, rr_score, aa_score, aq),
    )
