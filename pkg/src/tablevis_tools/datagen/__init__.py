#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Training data construction: source filters, rewriting samples, rollout filtering and preference pairs."""

from __future__ import annotations

from tablevis_tools.datagen.filters import (
    consensus_filter,
    mutual_approval,
    parse_yes_no,
    resolution_filter,
    statistical_screen,
)
from tablevis_tools.datagen.models import (
    JudgeVote,
    PairCandidate,
    PreferencePair,
    RefinementSample,
    RolloutOutcome,
    SftSample,
    SkipRecord,
    datagen_key,
)
from tablevis_tools.datagen.preferences import build_preference_pairs, judge_id, parse_vote, vote_pair
from tablevis_tools.datagen.rewrite_data import build_rewrite_sample, build_rewrite_samples
from tablevis_tools.datagen.rollout import keep_sample, parse_rollout_verdict, rollout_filter

__all__ = [
    "JudgeVote",
    "PairCandidate",
    "PreferencePair",
    "RefinementSample",
    "RolloutOutcome",
    "SftSample",
    "SkipRecord",
    "build_preference_pairs",
    "build_rewrite_sample",
    "build_rewrite_samples",
    "consensus_filter",
    "datagen_key",
    "judge_id",
    "keep_sample",
    "mutual_approval",
    "parse_rollout_verdict",
    "parse_vote",
    "parse_yes_no",
    "resolution_filter",
    "rollout_filter",
    "statistical_screen",
    "vote_pair",
]
