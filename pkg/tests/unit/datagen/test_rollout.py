#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

import itertools
from typing import TYPE_CHECKING

import pytest

from tablevis_tools.backends import clear_backend_cache, get_backend, stamp_image
from tablevis_tools.core.config import BackendConfig, MockScript
from tablevis_tools.datagen import RefinementSample, keep_sample, parse_rollout_verdict, rollout_filter
from tablevis_tools.runstore import RunStore

if TYPE_CHECKING:
    from pathlib import Path

    from tablevis_tools.datagen.models import RolloutVerdict

_INITIAL = stamp_image(b"initial")
_SAMPLE = RefinementSample(
    initial_image=_INITIAL.sha256,
    instruction="1. Fix the title.",
    table_markdown="| A | B |\n| --- | --- |\n| 1 | 2 |",
)
_EDITOR = BackendConfig.mock(MockScript(name="editor"))


def _judge(*replies: str) -> BackendConfig:
    return BackendConfig.mock(MockScript(name="rollout-judge", responses=replies))


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("Most errors were fixed.\nBETTER", "BETTER"),
        ("worse.", "WORSE"),
        ("Better overall. **Better**", "BETTER"),
        ("BETTER in places, WORSE in others", None),
        ("", None),
    ],
)
def test_parse_rollout_verdict(text: str, expected: RolloutVerdict | None) -> None:
    assert parse_rollout_verdict(text) == expected


def test_every_verdict_vector_of_five() -> None:
    kept = 0
    for bits in itertools.product(("BETTER", "WORSE"), repeat=5):
        clear_backend_cache()
        outcome = rollout_filter(_SAMPLE, _INITIAL, _EDITOR, _judge(*bits), k=5)
        assert outcome.verdicts == bits
        assert outcome.kept == keep_sample(bits)
        assert outcome.kept == (len(set(bits)) > 1)
        kept += outcome.kept
    assert kept == 30  # noqa: PLR2004


def test_unanimous_samples_are_discarded_with_a_reason() -> None:
    outcome = rollout_filter(_SAMPLE, _INITIAL, _EDITOR, _judge(*["WORSE"] * 3), k=3)
    assert not outcome.kept
    assert outcome.reason == "all 3 candidates judged WORSE"


def test_candidates_use_distinct_seeds(tmp_path: Path) -> None:
    store = RunStore(tmp_path)
    outcome = rollout_filter(_SAMPLE, _INITIAL, _EDITOR, _judge("BETTER", "WORSE", "BETTER"), k=3, store=store)
    assert len(set(outcome.candidates)) == 3  # noqa: PLR2004
    assert outcome.to_record()["candidates"] == list(outcome.candidates)
    assert all(store.has_blob(digest) for digest in (*outcome.candidates, _INITIAL.sha256))
    assert outcome.to_record()["verdicts"] == ["BETTER", "WORSE", "BETTER"]


def test_unparseable_verdict_is_asked_again() -> None:
    judge = _judge("Hard to say.", "WORSE", "BETTER")
    outcome = rollout_filter(_SAMPLE, _INITIAL, _EDITOR, judge, k=2)
    assert outcome.verdicts == ("WORSE", "BETTER")
    assert get_backend(judge).calls["chat"] == 3  # noqa: PLR2004


def test_protocol_failure_discards_the_sample() -> None:
    outcome = rollout_filter(_SAMPLE, _INITIAL, _EDITOR, _judge("BETTER", "unsure", "still unsure"), k=3)
    assert not outcome.kept
    assert outcome.verdicts == ("BETTER",)
    assert outcome.reason == "judge protocol failure on candidate 2/3"


def test_edit_failure_discards_the_sample() -> None:
    editor = BackendConfig.mock(MockScript(name="refusing", refuse_images=True))
    outcome = rollout_filter(_SAMPLE, _INITIAL, editor, _judge("BETTER"), k=2)
    assert not outcome.kept
    assert outcome.reason is not None
    assert outcome.reason.startswith("edit 1/2 failed")


def test_rollout_arguments_are_validated() -> None:
    with pytest.raises(ValueError, match="at least 2"):
        rollout_filter(_SAMPLE, _INITIAL, _EDITOR, _judge(), k=1)
    with pytest.raises(ValueError, match="digest"):
        rollout_filter(_SAMPLE, stamp_image(b"other"), _EDITOR, _judge(), k=2)
