#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Closed-form training math: losses, digit rewards and GRPO arithmetic."""

from __future__ import annotations

from tablevis_tools.reward_math.grpo import (
    GrpoBatch,
    grpo_advantages,
    grpo_objective,
    grpo_objective_from_advantages,
)
from tablevis_tools.reward_math.losses import TokenDistribution, bt_loss, bt_loss_batch, next_token_loss
from tablevis_tools.reward_math.rewards import combined_reward, digit_expectation_score, digit_probs_from_logits

__all__ = [
    "GrpoBatch",
    "TokenDistribution",
    "bt_loss",
    "bt_loss_batch",
    "combined_reward",
    "digit_expectation_score",
    "digit_probs_from_logits",
    "grpo_advantages",
    "grpo_objective",
    "grpo_objective_from_advantages",
    "next_token_loss",
]
