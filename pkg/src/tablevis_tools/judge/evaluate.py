#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Multi-view evaluation of one image: four concurrent dimension audits plus the aesthetic score."""

from __future__ import annotations

from concurrent.futures import Future, ThreadPoolExecutor
from typing import TYPE_CHECKING, Literal

from pydantic import BaseModel, ConfigDict

from tablevis_tools.backends import ImageBlob, aesthetic_score
from tablevis_tools.core.exceptions import BackendError, EvaluationError, JudgeProtocolError
from tablevis_tools.judge.audit import AuditOutcome, run_audit
from tablevis_tools.judge.reports import (
    DIMENSIONS,
    AaReport,
    DaReport,
    Dimension,
    DimensionScores,
    RrReport,
    TrReport,
)
from tablevis_tools.judge.scoring import dimension_scores
from tablevis_tools.utils.logging import get_logger

if TYPE_CHECKING:
    from tablevis_tools.core.config import JudgeConfig
    from tablevis_tools.pipeline.models import RunRecord
    from tablevis_tools.runstore import RunStore
    from tablevis_tools.tables import TableInstance

_logger = get_logger(__name__)

ScoredImage = Literal["final", "reference"]
"""Which image of an instance an evaluation scores: the pipeline's final image or the ground-truth reference."""


def _evaluation_dir(instance_id: str, scored: ScoredImage) -> str:
    return f"runs/{instance_id}" if scored == "final" else f"runs/{instance_id}/reference"


def scores_key(instance_id: str, scored: ScoredImage = "final") -> str:
    """Store key of the scores document of an instance."""
    return f"{_evaluation_dir(instance_id, scored)}/scores.json"


def audit_key(instance_id: str, dim: Dimension, scored: ScoredImage = "final") -> str:
    """Store key of the raw audit document of one dimension."""
    return f"{_evaluation_dir(instance_id, scored)}/audits/{dim.lower()}.json"


def round_scores_key(instance_id: str) -> str:
    """Store key of the per-round scores document of an instance."""
    return f"runs/{instance_id}/round_scores.json"


class ScoresDocument(BaseModel):
    """Persisted evaluation of one instance. Holds no timestamps, so equal evaluations give equal bytes."""

    model_config = ConfigDict(frozen=True)

    instance_id: str
    image: str
    """Digest of the evaluated image."""
    scores: DimensionScores
    failed_dims: tuple[str, ...] = ()


class EvaluationResult(BaseModel):
    """Scores of one image together with the audits they were derived from."""

    model_config = ConfigDict(frozen=True)

    instance_id: str
    image: str
    scores: DimensionScores
    audits: dict[str, AuditOutcome]
    failed_dims: tuple[str, ...] = ()

    def document(self) -> ScoresDocument:
        """The persisted form of the result."""
        return ScoresDocument(
            instance_id=self.instance_id, image=self.image, scores=self.scores, failed_dims=self.failed_dims
        )


def evaluate_instance(
    table: TableInstance,
    image: ImageBlob,
    cfg: JudgeConfig,
    store: RunStore | None = None,
    *,
    scored: ScoredImage = "final",
) -> EvaluationResult:
    """Audits an image in all dimensions and aggregates the scores.

    The four audits and the aesthetic call run concurrently. A failed AA audit only drops AA from the
    aggregate, a failure in any other dimension fails the instance.

    Args:
        table: The source table.
        image: The image under evaluation.
        cfg: The judge config.
        store: When given, the image, the scores document and the raw audits are persisted.
        scored: Which image of the instance is evaluated, selecting where the documents are stored.

    Returns:
        The evaluation result.

    Raises:
        EvaluationError: When DA, TR, RR or AQ cannot be determined.

    """
    outcomes: dict[str, AuditOutcome] = {}
    errors: dict[str, Exception] = {}
    with ThreadPoolExecutor(max_workers=cfg.max_workers, thread_name_prefix="audit") as executor:
        audit_futures: dict[Dimension, Future[AuditOutcome]] = {
            dim: executor.submit(run_audit, dim, table, image, cfg.judge, cfg.templates_dir) for dim in DIMENSIONS
        }
        aq_future = executor.submit(aesthetic_score, cfg.aesthetic, image)
        for dim, future in audit_futures.items():
            try:
                outcomes[dim] = future.result()
            except (JudgeProtocolError, BackendError) as ex:
                errors[dim] = ex
        aq: float | None = None
        try:
            aq = aq_future.result()
        except BackendError as ex:
            errors["AQ"] = ex

    failed = sorted(dim for dim in errors if dim != "AA")
    if failed or aq is None:
        cause = errors[failed[0]] if failed else None
        msg = f"Evaluation of {table.id} failed in {', '.join(failed)}: {cause}"
        raise EvaluationError(msg) from cause
    if "AA" in errors:
        _logger.warning("AA audit of %s failed, excluding AA from the aggregate: %s", table.id, errors["AA"])

    aa_report = outcomes["AA"].report if "AA" in outcomes else None
    da_report, tr_report, rr_report = outcomes["DA"].report, outcomes["TR"].report, outcomes["RR"].report
    if not (
        isinstance(da_report, DaReport)
        and isinstance(tr_report, TrReport)
        and isinstance(rr_report, RrReport)
        and (aa_report is None or isinstance(aa_report, AaReport))
    ):
        msg = f"Audit reports of {table.id} do not match their dimensions"
        raise EvaluationError(msg)

    result = EvaluationResult(
        instance_id=table.id,
        image=image.sha256,
        scores=dimension_scores(da_report, tr_report, rr_report, aa_report, aq),
        audits=outcomes,
        failed_dims=tuple(sorted(errors)),
    )
    if store is not None:
        persist_evaluation(result, image, store, scored)
    return result


def persist_evaluation(
    result: EvaluationResult, image: ImageBlob, store: RunStore, scored: ScoredImage = "final"
) -> None:
    """Writes the image blob, the raw audits and then the scores document of an evaluation."""
    store.put_blob(image.data)
    for name in sorted(result.audits):
        outcome = result.audits[name]
        store.write_document(audit_key(result.instance_id, outcome.dimension, scored), outcome)
    store.write_document(scores_key(result.instance_id, scored), result.document())


class RoundScores(BaseModel):
    """Scores of the image held after each round; index 0 is the initial image."""

    model_config = ConfigDict(frozen=True)

    instance_id: str
    images: tuple[str, ...]
    scores: tuple[DimensionScores, ...]


def round_images(record: RunRecord, max_rounds: int) -> list[str]:
    """Digests of the image held after each round, carrying the last image forward after an early stop.

    Args:
        record: A completed run record.
        max_rounds: Number of rounds to report.

    Returns:
        `max_rounds + 1` digests, starting with the initial image.

    """
    if record.initial_image is None:
        msg = f"Run {record.instance_id} has no initial image"
        raise ValueError(msg)
    images = [record.initial_image]
    for round_index in range(1, max_rounds + 1):
        current = images[-1]
        if round_index <= len(record.rounds):
            current = record.rounds[round_index - 1].output_image or current
        images.append(current)
    return images


def evaluate_rounds(
    table: TableInstance,
    record: RunRecord,
    store: RunStore,
    cfg: JudgeConfig,
    max_rounds: int,
) -> RoundScores:
    """Scores the initial image and the image after every round.

    Identical images are evaluated once.

    Args:
        table: The source table.
        record: The completed run record.
        store: The store holding the run images; the per-round document is written to it.
        cfg: The judge config.
        max_rounds: Number of rounds to report.

    Returns:
        The per-round scores.

    """
    images = round_images(record, max_rounds)
    by_digest: dict[str, DimensionScores] = {}
    for digest in images:
        if digest not in by_digest:
            blob = ImageBlob.from_bytes(store.get_blob(digest))
            by_digest[digest] = evaluate_instance(table, blob, cfg).scores
    result = RoundScores(
        instance_id=table.id, images=tuple(images), scores=tuple(by_digest[digest] for digest in images)
    )
    store.write_document(round_scores_key(table.id), result)
    return result
