#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Pipeline run documents."""

from __future__ import annotations

from datetime import datetime
from typing import Literal, Self

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

VerdictStatus = Literal["Satisfactory", "NeedsRefinement"]
Termination = Literal["EarlyStop", "MaxRounds", "NoRefinement"]
Stage = Literal["rewrite", "generate", "reflect", "refine", "store"]


class RewriteOutput(BaseModel):
    """Visual plan produced by the rewriting stage."""

    model_config = ConfigDict(frozen=True)

    rationale: str
    description: str = Field(min_length=1)
    """Generation prompt, passed to the image model verbatim."""


class ReflectionVerdict(BaseModel):
    """Outcome of one reflection."""

    model_config = ConfigDict(frozen=True)

    status: VerdictStatus
    instructions: tuple[str, ...] = ()
    raw_text: str

    @model_validator(mode="after")
    def _check_instructions(self) -> Self:
        if self.status == "Satisfactory" and self.instructions:
            msg = "A satisfactory verdict carries no instructions"
            raise ValueError(msg)
        if self.status == "NeedsRefinement" and not self.instructions:
            msg = "A needs-refinement verdict carries at least one instruction"
            raise ValueError(msg)
        if any(not instruction.strip() for instruction in self.instructions):
            msg = "Instructions must not be empty"
            raise ValueError(msg)
        return self

    def instruction_block(self) -> str:
        """Joins the instructions into the numbered block sent to the image editor."""
        return "\n".join(f"{idx}. {instruction}" for idx, instruction in enumerate(self.instructions, start=1))


class RoundRecord(BaseModel):
    """One reflect and refine iteration."""

    model_config = ConfigDict(frozen=True)

    round_index: PositiveInt
    verdict: ReflectionVerdict
    input_image: str
    output_image: str | None = None
    edit_instruction: str | None = None
    """Instruction block sent to the editor. Absent for satisfactory rounds."""
    refine_error: str | None = None
    """Set when the edit call failed and the input image was carried forward."""

    @model_validator(mode="after")
    def _check_output(self) -> Self:
        if (self.output_image is not None) != (self.verdict.status == "NeedsRefinement"):
            msg = "output_image is present iff the verdict needs refinement"
            raise ValueError(msg)
        return self


class RunFailure(BaseModel):
    """Failure marker of an aborted run."""

    model_config = ConfigDict(frozen=True)

    stage: Stage
    error_type: str
    message: str


class RunRecord(BaseModel):
    """Full trace of one pipeline run.

    Timestamps are informational and excluded from `content_fingerprint`.
    """

    model_config = ConfigDict(frozen=True)

    instance_id: str
    mode: Literal["full", "rewrite_only", "direct"] = "full"
    rewrite: RewriteOutput | None = None
    generation_prompt: str | None = None
    initial_image: str | None = None
    rounds: tuple[RoundRecord, ...] = ()
    final_image: str | None = None
    termination: Termination | None = None
    config_fingerprint: str
    failure: RunFailure | None = None
    started_at: datetime | None = None
    finished_at: datetime | None = None

    @model_validator(mode="after")
    def _check_trace(self) -> Self:
        if self.failure is not None:
            return self
        if self.initial_image is None or self.final_image is None or self.termination is None:
            msg = "A completed run has an initial image, a final image and a termination"
            raise ValueError(msg)
        expected_final = self.initial_image
        for round_record in self.rounds:
            if round_record.output_image is not None:
                expected_final = round_record.output_image
        if self.final_image != expected_final:
            msg = "final_image must be the last refined image, or the initial image when nothing was refined"
            raise ValueError(msg)
        last_satisfied = bool(self.rounds) and self.rounds[-1].verdict.status == "Satisfactory"
        if (self.termination == "EarlyStop") != last_satisfied:
            msg = "termination is EarlyStop iff the last verdict is satisfactory"
            raise ValueError(msg)
        return self

    @property
    def completed(self) -> bool:
        """Whether the run finished without a failure marker."""
        return self.failure is None

    @property
    def refine_count(self) -> int:
        """Number of edit calls issued by the run."""
        return sum(1 for r in self.rounds if r.verdict.status == "NeedsRefinement")

    def content_fingerprint(self) -> str:
        """Canonical JSON of the record without timestamps, for determinism checks."""
        return self.model_dump_json(exclude={"started_at", "finished_at"})
