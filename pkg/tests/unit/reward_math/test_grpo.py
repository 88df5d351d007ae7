#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

import numpy as np
import pytest
from pydantic import ValidationError

from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import DomainError
from tablevis_tools.reward_math import GrpoBatch, grpo_advantages, grpo_objective, grpo_objective_from_advantages


def test_advantages_are_normalized() -> None:
    rng = np.random.default_rng(consts.reproducibility.SEED)
    for _ in range(20):
        rewards = rng.normal(size=int(rng.integers(2, 16)))
        adv = grpo_advantages(rewards)
        assert adv.mean() == pytest.approx(0.0, abs=1e-9)
        assert adv.std() == pytest.approx(1.0)


def test_advantages_use_population_std() -> None:
    np.testing.assert_allclose(grpo_advantages([0.0, 2.0]), [-1.0, 1.0])


def test_constant_group_has_zero_advantages() -> None:
    np.testing.assert_array_equal(grpo_advantages([3.0, 3.0, 3.0]), [0.0, 0.0, 0.0])
    np.testing.assert_array_equal(grpo_advantages([3.0, 3.0], eps_std=1e-4), [0.0, 0.0])


def test_single_sample_group_is_a_domain_error() -> None:
    with pytest.raises(DomainError):
        grpo_advantages([1.0])


def test_unit_ratios_give_mean_advantage() -> None:
    assert grpo_objective_from_advantages([0.5, -1.5, 2.0], [1.0, 1.0, 1.0], eps_clip=0.2) == pytest.approx(1 / 3)


def test_clipping_limits_positive_advantages() -> None:
    assert grpo_objective_from_advantages([1.0], [2.0], eps_clip=0.2) == pytest.approx(1.2)
    assert grpo_objective_from_advantages([1.0], [0.5], eps_clip=0.2) == pytest.approx(0.5)


def test_clipping_is_pessimistic_for_negative_advantages() -> None:
    assert grpo_objective_from_advantages([-1.0], [2.0], eps_clip=0.2) == pytest.approx(-2.0)
    assert grpo_objective_from_advantages([-1.0], [0.5], eps_clip=0.2) == pytest.approx(-0.8)


def test_objective_never_exceeds_the_unclipped_surrogate() -> None:
    rng = np.random.default_rng(consts.reproducibility.SEED)
    for _ in range(50):
        adv = rng.normal(size=8)
        ratios = rng.uniform(0.3, 2.0, size=8)
        assert grpo_objective_from_advantages(adv, ratios, eps_clip=0.2) <= float(np.mean(ratios * adv)) + 1e-12


def test_kl_penalty_is_subtracted() -> None:
    batch = GrpoBatch(rewards=(0.0, 1.0), ratios=(1.0, 1.0), beta=0.1, kl=2.0)
    assert grpo_objective(batch) == pytest.approx(-0.2)


def test_non_positive_ratios_are_rejected() -> None:
    with pytest.raises(DomainError):
        grpo_objective_from_advantages([1.0, -1.0], [1.0, 0.0], eps_clip=0.2)


def test_batch_validation() -> None:
    with pytest.raises(ValidationError):
        GrpoBatch(rewards=(0.0, 1.0), ratios=(1.0,))
    with pytest.raises(ValidationError):
        GrpoBatch(rewards=(0.0, 1.0), ratios=(1.0, 1.0), eps_clip=1.0)
