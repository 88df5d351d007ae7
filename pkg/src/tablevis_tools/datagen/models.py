#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Training data records and their line-delimited JSON forms."""

from __future__ import annotations

from typing import Any, Literal, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from tablevis_tools.backends import ImageBlob

PairSource = Literal["refined_vs_initial", "strong_vs_weak", "groundtruth_vs_generated"]
Preferred = Literal["first", "second", "tie"]
RolloutVerdict = Literal["BETTER", "WORSE"]


def datagen_key(pipeline: str, batch: str) -> str:
    """Store key of a datagen output batch."""
    return f"datagen/{pipeline}/{batch}.jsonl"


class SftSample(BaseModel):
    """Rewriting fine-tuning sample: `{table, rationale} -> {description}`."""

    model_config = ConfigDict(frozen=True)

    table_markdown: str = Field(min_length=1)
    rationale: str = Field(min_length=1)
    description: str = Field(min_length=1)


class RefinementSample(BaseModel):
    """Refinement training input: initial image plus edit instruction."""

    model_config = ConfigDict(frozen=True)

    initial_image: str
    """Digest of the initial image."""
    instruction: str = Field(min_length=1)
    table_markdown: str


class RolloutOutcome(BaseModel):
    """Result of rollout filtering one refinement sample."""

    model_config = ConfigDict(frozen=True)

    sample: RefinementSample
    kept: bool
    verdicts: tuple[RolloutVerdict, ...] = ()
    candidates: tuple[str, ...] = ()
    """Digests of the edited candidates."""
    reason: str | None = None
    """Why the sample was discarded."""

    def to_record(self) -> dict[str, Any]:
        """The refinement JSON lines record."""
        return {
            "initial_image_sha256": self.sample.initial_image,
            "instruction": self.sample.instruction,
            "table_markdown": self.sample.table_markdown,
            "kept": self.kept,
            "verdicts": list(self.verdicts),
            "candidates": list(self.candidates),
            "reason": self.reason,
        }


class JudgeVote(BaseModel):
    """One judge's preference between the first and second image of a pair."""

    model_config = ConfigDict(frozen=True)

    judge_id: str
    preferred: Preferred


class PairCandidate(BaseModel):
    """An image pair to be voted on."""

    model_config = ConfigDict(frozen=True)

    prompt: str
    image_a: ImageBlob
    image_b: ImageBlob
    source: PairSource


class PreferencePair(BaseModel):
    """Reward model training pair, emitted only when both judges agree on a winner."""

    model_config = ConfigDict(frozen=True)

    prompt: str
    winner: str
    loser: str
    source: PairSource
    votes: tuple[JudgeVote, ...]

    @model_validator(mode="after")
    def _check_pair(self) -> Self:
        if self.winner == self.loser:
            msg = "winner and loser must differ"
            raise ValueError(msg)
        return self

    def to_record(self) -> dict[str, Any]:
        """The preference JSON lines record."""
        return {
            "prompt": self.prompt,
            "winner_sha256": self.winner,
            "loser_sha256": self.loser,
            "source": self.source,
            "votes": [vote.model_dump() for vote in self.votes],
        }


class SkipRecord(BaseModel):
    """An input that produced no output record, with the reason."""

    model_config = ConfigDict(frozen=True)

    item_id: str
    reason: str
