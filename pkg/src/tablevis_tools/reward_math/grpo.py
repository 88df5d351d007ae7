#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Group relative advantages and the clipped surrogate objective, evaluated as scalars (no gradients)."""

from __future__ import annotations

from typing import Annotated, Self

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, model_validator

from tablevis_tools.core.exceptions import DomainError

MIN_GROUP_SIZE = 2


class GrpoBatch(BaseModel):
    """One group of G sampled outputs with their rewards and policy probability ratios."""

    model_config = ConfigDict(frozen=True)

    rewards: tuple[float, ...]
    ratios: tuple[float, ...]
    """`pi_theta / pi_theta_old` per sample, supplied by the caller."""
    kl: NonNegativeFloat = 0.0
    eps_clip: Annotated[float, Field(gt=0.0, lt=1.0)] = 0.2
    beta: NonNegativeFloat = 0.0
    eps_std: NonNegativeFloat = 1e-4

    @model_validator(mode="after")
    def _check_lengths(self) -> Self:
        if len(self.rewards) != len(self.ratios):
            msg = f"{len(self.rewards)} rewards but {len(self.ratios)} ratios"
            raise ValueError(msg)
        return self


def grpo_advantages(rewards: npt.ArrayLike, eps_std: float = 0.0) -> npt.NDArray[np.float64]:
    """Normalizes rewards within their group.

    Uses the population standard deviation (divides by G). A degenerate group with `eps_std == 0` gets all-zero
    advantages.

    Args:
        rewards: The G rewards of one group.
        eps_std: Constant added to the standard deviation.

    Returns:
        `(r_i - mean) / (std + eps_std)` per sample.

    Raises:
        DomainError: When the group has fewer than two samples.

    """
    values = np.asarray(rewards, dtype=np.float64)
    if values.ndim != 1 or values.size < MIN_GROUP_SIZE:
        msg = f"A group needs at least {MIN_GROUP_SIZE} rewards"
        raise DomainError(msg)
    centered = values - values.mean()
    denominator = values.std(ddof=0) + eps_std
    if denominator == 0.0:
        return np.zeros_like(values)
    return centered / denominator  # type: ignore[no-any-return]


def grpo_objective_from_advantages(
    advantages: npt.ArrayLike,
    ratios: npt.ArrayLike,
    eps_clip: float,
    beta: float = 0.0,
    kl: float = 0.0,
) -> float:
    """Clipped surrogate objective for given advantages.

    Args:
        advantages: Per-sample advantages.
        ratios: Per-sample probability ratios, all positive.
        eps_clip: Clip range epsilon.
        beta: KL penalty coefficient.
        kl: KL divergence estimate.

    Returns:
        `mean(min(ratio * A, clip(ratio, 1 - eps, 1 + eps) * A)) - beta * kl`.

    Raises:
        DomainError: On non-positive ratios or mismatched lengths.

    """
    adv = np.asarray(advantages, dtype=np.float64)
    rat = np.asarray(ratios, dtype=np.float64)
    if adv.shape != rat.shape or adv.size == 0:
        msg = "Advantages and ratios must be non-empty and of equal length"
        raise DomainError(msg)
    if np.any(rat <= 0.0):
        msg = "Probability ratios must be positive"
        raise DomainError(msg)
    unclipped = rat * adv
    clipped = np.clip(rat, 1.0 - eps_clip, 1.0 + eps_clip) * adv
    return float(np.mean(np.minimum(unclipped, clipped)) - beta * kl)


def grpo_objective(batch: GrpoBatch) -> float:
    """Clipped surrogate objective of a group, with advantages computed from its rewards.

    Examples:
        >>> grpo_objective(GrpoBatch(rewards=(0.0, 1.0), ratios=(1.0, 1.0), beta=0.1, kl=2.0))
        -0.2

    """
    advantages = grpo_advantages(batch.rewards, batch.eps_std)
    return grpo_objective_from_advantages(advantages, batch.ratios, batch.eps_clip, batch.beta, batch.kl)
