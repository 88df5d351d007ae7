#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

import numpy as np
import pytest

from tablevis_tools.core import consts
from tablevis_tools.judge import (
    AaReport,
    Alignment,
    DaReport,
    RrReport,
    TrReport,
    aggregate_score,
    dimension_scores,
    score_aa,
    score_da,
    score_rr,
    score_tr,
)
from tablevis_tools.judge.reports import AaReply, DaReply, RrReply, TrReply, clamp_reply


@pytest.mark.parametrize(
    ("da", "tr", "rr", "aa", "aq", "expected"),
    [
        (97.7, 99.5, 86.4, 96.6, 4.2, 84.44),
        (12.1, 46.7, 28.9, 18.7, 4.0, 29.28),
        (0.1, 1.6, 14.2, 7.7, 2.7, 10.12),
        (47.5, 90.9, 26.1, 14.1, 4.3, 44.32),
        (52.4, 82.9, 54.3, 40.0, 4.5, 54.92),
    ],
)
def test_aggregate_known_rows(
    da: float, tr: float, rr: float, aa: float, aq: float, expected: float
) -> None:
    assert round(aggregate_score(da, tr, rr, aa, aq), 2) == pytest.approx(expected)


def test_aggregate_without_aa_averages_four_terms() -> None:
    assert aggregate_score(80.0, 90.0, 100.0, None, 5.0) == pytest.approx(80.0)


def test_aggregate_against_oracle() -> None:
    rng = np.random.default_rng(consts.reproducibility.SEED)
    for _ in range(1000):
        da, tr, rr, aa = rng.uniform(0.0, 100.0, size=4)
        aq = rng.uniform(0.0, 10.0)
        if rng.random() < 0.2:  # noqa: PLR2004
            expected = (da + tr + rr + 10.0 * aq) / 4.0
            actual = aggregate_score(da, tr, rr, None, aq)
        else:
            expected = (da + tr + rr + aa + 10.0 * aq) / 5.0
            actual = aggregate_score(da, tr, rr, aa, aq)
        assert actual == pytest.approx(expected, abs=1e-9)
        assert 0.0 <= actual <= 100.0  # noqa: PLR2004


def test_dimension_formulas() -> None:
    assert score_da(DaReport(n_total=8, n_error=3)) == pytest.approx(62.5)
    assert score_tr(TrReport(l_total=200, l_error=6)) == pytest.approx(97.0)
    assert score_tr(TrReport(l_total=0, l_error=0)) == 0.0
    assert score_rr(RrReport(n_total=4, n_error=0)) == pytest.approx(100.0)


def test_aa_averages_applicable_sub_metrics() -> None:
    full = AaReport(label_error_pct=0.1, misaligned=Alignment(n_misaligned=1, n_total=10), mark_inappropriate_pct=0.4)
    assert score_aa(full) == pytest.approx(100.0 * (0.9 + 0.9 + 0.6) / 3)
    assert score_aa(AaReport(label_error_pct=0.25)) == pytest.approx(75.0)
    assert score_aa(AaReport()) is None


def test_dimension_scores_aggregate() -> None:
    scores = dimension_scores(
        DaReport(n_total=10, n_error=1),
        TrReport(l_total=200, l_error=6),
        RrReport(n_total=10, n_error=0),
        None,
        5.0,
    )
    assert scores.aa is None
    assert scores.score == pytest.approx((90.0 + 97.0 + 100.0 + 50.0) / 4)


def test_error_lists_define_error_counts() -> None:
    report = clamp_reply(DaReply(total_points=10, errors=["a", "b"]))
    assert report == DaReport(n_total=10, n_error=2)
    assert clamp_reply(RrReply(total_points=5, violations=[])) == RrReport(n_total=5, n_error=0)


def test_counts_are_clamped() -> None:
    assert clamp_reply(DaReply(total_points=2, errors=["a", "b", "c"])) == DaReport(n_total=2, n_error=2)
    assert clamp_reply(DaReply(total_points=0)) == DaReport(n_total=1, n_error=0)
    assert clamp_reply(TrReply(total_chars=10, error_chars=15)) == TrReport(l_total=10, l_error=10)
    assert clamp_reply(TrReply(total_chars=-5, error_chars=-1)) == TrReport(l_total=0, l_error=0)


@pytest.mark.parametrize(
    ("raw", "expected"),
    [(0.2, 0.2), (1.0, 1.0), (1.01, 1.0), (45.0, 1.0), (-0.3, 0.0), (float("nan"), None), (None, None)],
)
def test_fractions_are_clamped(raw: float | None, expected: float | None) -> None:
    report = clamp_reply(AaReply(label_error_pct=raw))
    assert isinstance(report, AaReport)
    if expected is None:
        assert report.label_error_pct is None
    else:
        assert report.label_error_pct == pytest.approx(expected)


def test_alignment_needs_labelled_points() -> None:
    assert clamp_reply(AaReply(total_points=0, misaligned_points=0)) == AaReport()
    report = clamp_reply(AaReply(total_points=4, misaligned_points=9))
    assert isinstance(report, AaReport)
    assert report.misaligned == Alignment(n_misaligned=4, n_total=4)
