#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Benchmark execution with bounded instance parallelism and resume support."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import TYPE_CHECKING

from tqdm import tqdm

from tablevis_tools.backends import ImageBlob
from tablevis_tools.bench.report import BenchReport, FailureStage, InstanceFailure, InstanceRow, stats
from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import PipelineRunError, TableVisError
from tablevis_tools.judge import RoundScores, ScoresDocument, evaluate_instance, evaluate_rounds, scores_key
from tablevis_tools.judge.evaluate import ScoredImage, round_scores_key
from tablevis_tools.pipeline import load_run, run_pipeline
from tablevis_tools.utils.logging import get_logger, timing_context

if TYPE_CHECKING:
    from tablevis_tools.bench.dataset import BenchDataset
    from tablevis_tools.core.config import JudgeConfig, PipelineConfig
    from tablevis_tools.runstore import RunStore
    from tablevis_tools.tables import TableInstance

_logger = get_logger(__name__)


def _round_scores(
    table: TableInstance,
    store: RunStore,
    judge_cfg: JudgeConfig,
    max_rounds: int,
) -> tuple[float, ...]:
    key = round_scores_key(table.id)
    if store.has_document(key):
        existing = store.read_document(key, RoundScores)
        if len(existing.scores) == max_rounds + 1:
            return tuple(scores.score for scores in existing.scores)
    result = evaluate_rounds(table, load_run(store, table.id), store, judge_cfg, max_rounds)
    return tuple(scores.score for scores in result.scores)


def run_instance(
    table: TableInstance,
    pipeline_cfg: PipelineConfig,
    judge_cfg: JudgeConfig,
    store: RunStore,
    *,
    resume: bool = False,
    per_round: bool = False,
    reference_images: bool = False,
) -> InstanceRow | InstanceFailure:
    """Runs the pipeline for one instance and scores its final image.

    Args:
        table: The instance.
        pipeline_cfg: The pipeline config.
        judge_cfg: The judge config.
        store: The run store.
        resume: Reuses an existing scores document of the same kind (pipeline or reference) instead of running
            anything.
        per_round: Also scores the image after every round.
        reference_images: Scores the instance's reference image instead of running the pipeline.

    Returns:
        The scores row, or the failure that prevented scoring.

    """
    stage: FailureStage = "reference" if reference_images else "pipeline"
    scored: ScoredImage = "reference" if reference_images else "final"
    rounds: tuple[float, ...] = ()
    try:
        key = scores_key(table.id, scored)
        if resume and store.has_document(key):
            _logger.info("Resuming %s from its scores document", table.id)
            document = store.read_document(key, ScoresDocument)
            if per_round and not reference_images:
                stage = "evaluation"
                rounds = _round_scores(table, store, judge_cfg, pipeline_cfg.max_rounds)
            return InstanceRow.from_scores(table.id, table.n_total, document.scores, rounds)

        if reference_images:
            if table.reference_image is None:
                return InstanceFailure(
                    instance_id=table.id,
                    stage=stage,
                    error_type="MissingReferenceImage",
                    message="instance has no reference image",
                )
            image = ImageBlob.from_file(Path(table.reference_image))
        else:
            record = run_pipeline(table, pipeline_cfg, store)
            if record.final_image is None:
                msg = f"Run {table.id} completed without a final image"
                raise PipelineRunError(msg)
            image = ImageBlob.from_bytes(store.get_blob(record.final_image))

        stage = "evaluation"
        result = evaluate_instance(table, image, judge_cfg, store, scored=scored)
        if per_round and not reference_images:
            rounds = _round_scores(table, store, judge_cfg, pipeline_cfg.max_rounds)
        return InstanceRow.from_scores(table.id, table.n_total, result.scores, rounds)
    except (TableVisError, OSError) as ex:
        _logger.exception("Instance %s failed during %s", table.id, stage)
        return InstanceFailure(instance_id=table.id, stage=stage, error_type=type(ex).__name__, message=str(ex))


def run_bench(
    dataset: BenchDataset,
    pipeline_cfg: PipelineConfig,
    judge_cfg: JudgeConfig,
    store: RunStore,
    concurrency: int = consts.compute.DEFAULT_CONCURRENCY,
    *,
    resume: bool = False,
    per_round: bool = False,
    reference_images: bool = False,
) -> BenchReport:
    """Runs and scores every dataset instance, at most `concurrency` at a time.

    Instance failures are recorded in the report and never stop the run.

    Args:
        dataset: The dataset.
        pipeline_cfg: The pipeline config.
        judge_cfg: The judge config.
        store: The run store.
        concurrency: Maximum number of instances in flight.
        resume: Skips instances that already have a scores document.
        per_round: Also scores the image after every round.
        reference_images: Scores the reference images instead of running the pipeline.

    Returns:
        The report, rows and failures in dataset order.

    """
    if concurrency < 1:
        msg = f"concurrency must be positive, got {concurrency}"
        raise ValueError(msg)

    results: dict[str, InstanceRow | InstanceFailure] = {}
    with (
        timing_context(f"run_bench({len(dataset.instances)} instances)"),
        ThreadPoolExecutor(max_workers=concurrency, thread_name_prefix="bench") as executor,
    ):
        futures = {
            executor.submit(
                run_instance,
                table,
                pipeline_cfg,
                judge_cfg,
                store,
                resume=resume,
                per_round=per_round,
                reference_images=reference_images,
            ): table.id
            for table in dataset.instances
        }
        for future in tqdm(as_completed(futures), total=len(futures), desc="Benchmarking", unit="instance"):
            results[futures[future]] = future.result()

    ordered = [results[table.id] for table in dataset.instances]
    report = BenchReport(
        rows=tuple(r for r in ordered if isinstance(r, InstanceRow)),
        failures=tuple(r for r in ordered if isinstance(r, InstanceFailure)),
        histogram=stats(dataset),
    )
    _logger.info(
        "Benchmark finished: %d scored, %d failed, mean Score %s",
        len(report.rows),
        len(report.failures),
        "n/a" if report.mean_score is None else f"{report.mean_score:.2f}",
    )
    return report
