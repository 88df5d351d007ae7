#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Scalar rewards read from a reward model's digit token probabilities, and the blended refinement reward."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import DomainError

N_DIGITS = 10


def _digit_vector(values: npt.ArrayLike) -> npt.NDArray[np.float64]:
    vector = np.asarray(values, dtype=np.float64)
    if vector.shape != (N_DIGITS,) or not np.all(np.isfinite(vector)):
        msg = f"Expected {N_DIGITS} finite values, one per digit 0-9"
        raise DomainError(msg)
    return vector


def digit_probs_from_logits(logits: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Softmax over the ten digit token logits, shifted by the maximum for stability."""
    vector = _digit_vector(logits)
    shifted = np.exp(vector - vector.max())
    return shifted / shifted.sum()  # type: ignore[no-any-return]


def digit_expectation_score(digit_probs: npt.ArrayLike) -> float:
    """Probability weighted digit, renormalized over the digit mass.

    Args:
        digit_probs: Ten non-negative probabilities for the digits 0-9. They need not sum to 1.

    Returns:
        `sum(i * p_i) / sum(p_i)`, in [0, 9].

    Raises:
        DomainError: On negative probabilities or zero total mass.

    Examples:
        >>> digit_expectation_score([0, 0, 0, 0.5, 0, 0, 0, 0.5, 0, 0])
        5.0

    """
    probs = _digit_vector(digit_probs)
    if np.any(probs < 0):
        msg = "Digit probabilities must be non-negative"
        raise DomainError(msg)
    total = probs.sum()
    if total <= 0:
        msg = "Digit probabilities carry no mass"
        raise DomainError(msg)
    return float(np.dot(np.arange(N_DIGITS, dtype=np.float64), probs) / total)


def combined_reward(
    f: float,
    image_reward: float,
    reward_model_weight: float = consts.pipeline.REWARD_MODEL_WEIGHT,
    image_reward_weight: float = consts.pipeline.IMAGE_REWARD_WEIGHT,
) -> float:
    """Weighted blend of the preference reward model output and the image reward (0.8 / 0.2 by default)."""
    return reward_model_weight * f + image_reward_weight * image_reward
