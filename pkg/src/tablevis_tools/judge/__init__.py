#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Benchmark judge: auditor protocol, deterministic dimension scores and instance evaluation."""

from __future__ import annotations

from tablevis_tools.judge.audit import AuditOutcome, audit_dimension, extract_json_object, run_audit
from tablevis_tools.judge.evaluate import (
    EvaluationResult,
    RoundScores,
    ScoresDocument,
    evaluate_instance,
    evaluate_rounds,
    scores_key,
)
from tablevis_tools.judge.reports import (
    DIMENSIONS,
    AaReport,
    Alignment,
    DaReport,
    Dimension,
    DimensionScores,
    RrReport,
    TrReport,
)
from tablevis_tools.judge.scoring import aggregate_score, dimension_scores, score_aa, score_da, score_rr, score_tr

__all__ = [
    "DIMENSIONS",
    "AaReport",
    "Alignment",
    "AuditOutcome",
    "DaReport",
    "Dimension",
    "DimensionScores",
    "EvaluationResult",
    "RoundScores",
    "RrReport",
    "ScoresDocument",
    "TrReport",
    "aggregate_score",
    "audit_dimension",
    "dimension_scores",
    "evaluate_instance",
    "evaluate_rounds",
    "extract_json_object",
    "run_audit",
    "score_aa",
    "score_da",
    "score_rr",
    "score_tr",
    "scores_key",
]
