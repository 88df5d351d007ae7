#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Next-token and Bradley-Terry losses as plain double precision scalars."""

from __future__ import annotations

from typing import Self

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, model_validator

from tablevis_tools.core.exceptions import DomainError

PROB_SUM_TOLERANCE = 1e-6


class TokenDistribution(BaseModel):
    """Predicted probability vectors of N positions and the target class index of each position."""

    model_config = ConfigDict(frozen=True)

    probs: tuple[tuple[float, ...], ...] = Field(min_length=1)
    labels: tuple[NonNegativeInt, ...]

    @model_validator(mode="after")
    def _check_shape(self) -> Self:
        if len(self.probs) != len(self.labels):
            msg = f"{len(self.probs)} probability vectors but {len(self.labels)} labels"
            raise ValueError(msg)
        for idx, (row, label) in enumerate(zip(self.probs, self.labels, strict=True)):
            if label >= len(row):
                msg = f"label {label} at position {idx} is outside a vocabulary of {len(row)}"
                raise ValueError(msg)
            if any(p < 0 for p in row) or abs(sum(row) - 1.0) > PROB_SUM_TOLERANCE:
                msg = f"probabilities at position {idx} do not form a distribution"
                raise ValueError(msg)
        return self


def next_token_loss(d: TokenDistribution) -> float:
    """Mean negative log-likelihood of the target tokens.

    Args:
        d: The token distribution.

    Returns:
        `-(1/N) * sum(log p[n][label[n]])`.

    Raises:
        DomainError: When a target token has probability 0.

    """
    selected = np.array([row[label] for row, label in zip(d.probs, d.labels, strict=True)], dtype=np.float64)
    if np.any(selected <= 0.0):
        msg = "A target token has zero probability, the loss is infinite"
        raise DomainError(msg)
    return float(-np.mean(np.log(selected)))


def bt_loss(f_w: float, f_l: float) -> float:
    """Bradley-Terry loss `-log(sigmoid(f_w - f_l))` in the overflow-free softplus form.

    Examples:
        >>> round(bt_loss(1.0, 0.0), 6)
        0.313262

    """
    return float(np.logaddexp(0.0, -(f_w - f_l)))


def bt_loss_batch(f_w: npt.ArrayLike, f_l: npt.ArrayLike) -> float:
    """Mean Bradley-Terry loss over paired winner and loser rewards.

    Args:
        f_w: Winner rewards.
        f_l: Loser rewards, same shape.

    Returns:
        The mean loss.

    """
    winners = np.asarray(f_w, dtype=np.float64)
    losers = np.asarray(f_l, dtype=np.float64)
    if winners.shape != losers.shape or winners.size == 0:
        msg = "Winner and loser rewards must be non-empty and of equal shape"
        raise DomainError(msg)
    return float(np.mean(np.logaddexp(0.0, -(winners - losers))))
