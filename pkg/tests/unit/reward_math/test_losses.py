#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

import math

import numpy as np
import pytest
from pydantic import ValidationError

from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import DomainError
from tablevis_tools.reward_math import TokenDistribution, bt_loss, bt_loss_batch, next_token_loss


def test_bt_loss_of_a_tie_is_ln2() -> None:
    assert bt_loss(0.5, 0.5) == pytest.approx(math.log(2))


def test_bt_loss_known_value() -> None:
    assert bt_loss(1.0, 0.0) == pytest.approx(0.313262, abs=1e-6)


def test_bt_loss_is_stable_for_large_margins() -> None:
    assert bt_loss(1000.0, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert bt_loss(0.0, 1000.0) == pytest.approx(1000.0)
    assert math.isfinite(bt_loss(-1e6, 1e6))


def test_bt_loss_depends_on_the_margin_only() -> None:
    rng = np.random.default_rng(consts.reproducibility.SEED)
    for f_w, f_l, shift in rng.normal(size=(50, 3)) * 5:
        assert bt_loss(f_w, f_l) == pytest.approx(bt_loss(f_w + shift, f_l + shift))


def test_bt_loss_batch_is_the_mean() -> None:
    assert bt_loss_batch([1.0, 0.0], [0.0, 0.0]) == pytest.approx((bt_loss(1.0, 0.0) + math.log(2)) / 2)


def test_bt_loss_batch_rejects_mismatched_shapes() -> None:
    with pytest.raises(DomainError):
        bt_loss_batch([1.0, 2.0], [0.0])


@pytest.mark.parametrize("vocab", [2, 10, 1000])
def test_uniform_next_token_loss_is_log_vocab(vocab: int) -> None:
    d = TokenDistribution(probs=((1.0 / vocab,) * vocab,) * 3, labels=(0, vocab - 1, 1))
    assert next_token_loss(d) == pytest.approx(math.log(vocab))


def test_certain_prediction_has_zero_loss() -> None:
    assert next_token_loss(TokenDistribution(probs=((0.0, 1.0),), labels=(1,))) == 0.0


def test_zero_probability_target_is_a_domain_error() -> None:
    with pytest.raises(DomainError):
        next_token_loss(TokenDistribution(probs=((1.0, 0.0),), labels=(1,)))


@pytest.mark.parametrize(
    ("probs", "labels"),
    [
        (((0.5, 0.5),), (2,)),
        (((0.5, 0.6),), (0,)),
        (((1.5, -0.5),), (0,)),
        (((0.5, 0.5),), (0, 1)),
    ],
)
def test_invalid_distributions_are_rejected(probs: tuple[tuple[float, ...], ...], labels: tuple[int, ...]) -> None:
    with pytest.raises(ValidationError):
        TokenDistribution(probs=probs, labels=labels)
