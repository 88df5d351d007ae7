#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Pipeline state machine: rewrite, generate, then reflect and refine until satisfied or out of rounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import UTC, datetime
from typing import TYPE_CHECKING

from tablevis_tools.backends import ImageBlob, edit_image
from tablevis_tools.core.exceptions import BackendError, PipelineRunError, StoreError
from tablevis_tools.pipeline import stages
from tablevis_tools.pipeline.models import (
    RewriteOutput,
    RoundRecord,
    RunFailure,
    RunRecord,
    Stage,
    Termination,
)
from tablevis_tools.tables import serialize_markdown
from tablevis_tools.utils.logging import get_logger

if TYPE_CHECKING:
    from tablevis_tools.core.config import BackendConfig, PipelineConfig
    from tablevis_tools.runstore import RunStore
    from tablevis_tools.tables import TableInstance

_logger = get_logger(__name__)


def run_key(instance_id: str) -> str:
    """Store key of the run document of an instance."""
    return f"runs/{instance_id}/run.json"


@dataclass
class _Trace:
    stage: Stage = "rewrite"
    rewrite: RewriteOutput | None = None
    prompt: str | None = None
    initial_image: str | None = None
    rounds: list[RoundRecord] = field(default_factory=list)


def _refinement_loop(
    table: TableInstance,
    image: ImageBlob,
    cfg: PipelineConfig,
    store: RunStore,
    trace: _Trace,
) -> tuple[str, Termination]:
    issued: list[str] = []
    for round_index in range(1, cfg.max_rounds + 1):
        trace.stage = "reflect"
        verdict = stages.reflect(
            table,
            image,
            cfg,
            round_index=round_index,
            prior_instructions=issued,
            description=trace.prompt,
        )
        if verdict.status == "Satisfactory":
            trace.rounds.append(RoundRecord(round_index=round_index, verdict=verdict, input_image=image.sha256))
            return image.sha256, "EarlyStop"

        block = verdict.instruction_block()
        trace.stage = "refine"
        try:
            edited = stages.refine(image, block, cfg)
        except BackendError as ex:
            _logger.warning(
                "Refinement of %s failed in round %d, keeping the current image: %s", table.id, round_index, ex
            )
            trace.rounds.append(
                RoundRecord(
                    round_index=round_index,
                    verdict=verdict,
                    input_image=image.sha256,
                    output_image=image.sha256,
                    edit_instruction=block,
                    refine_error=f"{type(ex).__name__}: {ex}",
                )
            )
            return image.sha256, "MaxRounds"

        trace.stage = "store"
        digest = store.put_blob(edited.data)
        trace.rounds.append(
            RoundRecord(
                round_index=round_index,
                verdict=verdict,
                input_image=image.sha256,
                output_image=digest,
                edit_instruction=block,
            )
        )
        issued.extend(verdict.instructions)
        image = edited
    return image.sha256, "MaxRounds"


def run_pipeline(table: TableInstance, cfg: PipelineConfig, store: RunStore) -> RunRecord:
    """Runs the full pipeline for one table and persists every image and the run record.

    In `full` mode the loop reflects at most `max_rounds` times and refines at most `max_rounds` times. The
    `rewrite_only` and `direct` modes stop after the initial image, `direct` using the serialized table as the
    generation prompt.

    Args:
        table: The table.
        cfg: The pipeline config.
        store: The run store.

    Returns:
        The persisted run record.

    Raises:
        PipelineRunError: When a stage fails. A partial record with a failure marker is persisted first.

    """
    key = run_key(table.id)
    store.path_for(key)
    started_at = datetime.now(tz=UTC)
    trace = _Trace()
    try:
        if cfg.mode == "direct":
            trace.prompt = serialize_markdown(table.grid)
        else:
            trace.rewrite = stages.rewrite(table, cfg)
            trace.prompt = trace.rewrite.description

        trace.stage = "generate"
        image = stages.generate_initial(trace.prompt, cfg)
        trace.stage = "store"
        trace.initial_image = store.put_blob(image.data)

        final_image: str
        termination: Termination
        if cfg.mode == "full":
            final_image, termination = _refinement_loop(table, image, cfg, store, trace)
        else:
            final_image, termination = trace.initial_image, "NoRefinement"

        record = RunRecord(
            instance_id=table.id,
            mode=cfg.mode,
            rewrite=trace.rewrite,
            generation_prompt=trace.prompt,
            initial_image=trace.initial_image,
            rounds=tuple(trace.rounds),
            final_image=final_image,
            termination=termination,
            config_fingerprint=cfg.fingerprint(),
            started_at=started_at,
            finished_at=datetime.now(tz=UTC),
        )
        store.write_document(key, record)
    except Exception as ex:
        _persist_failure(table, cfg, store, trace, ex, started_at)
        msg = f"Pipeline run {table.id} failed at stage {trace.stage}: {ex}"
        raise PipelineRunError(msg) from ex

    _logger.info(
        "Run %s finished with %s after %d round(s), %d refinement(s)",
        table.id,
        record.termination,
        len(record.rounds),
        record.refine_count,
    )
    return record


def _persist_failure(
    table: TableInstance,
    cfg: PipelineConfig,
    store: RunStore,
    trace: _Trace,
    ex: Exception,
    started_at: datetime,
) -> None:
    _logger.error("Run %s failed at stage %s: %s", table.id, trace.stage, ex)
    partial = RunRecord(
        instance_id=table.id,
        mode=cfg.mode,
        rewrite=trace.rewrite,
        generation_prompt=trace.prompt,
        initial_image=trace.initial_image,
        rounds=tuple(trace.rounds),
        config_fingerprint=cfg.fingerprint(),
        failure=RunFailure(stage=trace.stage, error_type=type(ex).__name__, message=str(ex)),
        started_at=started_at,
        finished_at=datetime.now(tz=UTC),
    )
    try:
        store.write_document(run_key(table.id), partial)
    except StoreError:
        _logger.exception("Could not persist the partial run record of %s", table.id)


def load_run(store: RunStore, instance_id: str) -> RunRecord:
    """Reads the run record of an instance."""
    return store.read_document(run_key(instance_id), RunRecord)


def replay_lineage(record: RunRecord, store: RunStore, refine_cfg: BackendConfig) -> list[str]:
    """Re-applies the recorded instruction blocks to the initial image.

    With deterministic image backends the last digest equals `record.final_image`. Rounds whose edit failed
    carried the image forward and are skipped.

    Args:
        record: A completed run record.
        store: The store holding the initial image.
        refine_cfg: The image editing backend.

    Returns:
        The image digests, starting with the initial image.

    """
    if record.initial_image is None:
        msg = f"Run {record.instance_id} has no initial image to replay from"
        raise ValueError(msg)
    image = ImageBlob.from_bytes(store.get_blob(record.initial_image))
    digests = [image.sha256]
    for round_record in record.rounds:
        if round_record.edit_instruction is None or round_record.refine_error is not None:
            continue
        image = edit_image(refine_cfg, image, round_record.edit_instruction)
        digests.append(image.sha256)
    return digests
