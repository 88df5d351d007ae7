"""Benchmark run over a dataset."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
from __future__ import annotations

import sys
from pathlib import Path
from typing import TYPE_CHECKING

import click

from tablevis_tools.bench import emit_report, load_dataset, run_bench
from tablevis_tools.cli.common import (
    EXIT_FAILURES,
    BadInput,
    config_options,
    load_app_config,
    open_store,
    out_option,
    pipeline_options,
    require_live,
)
from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import DatasetError
from tablevis_tools.utils.logging import get_logger

if TYPE_CHECKING:
    from tablevis_tools.core.config import PipelineMode

_logger = get_logger(__name__)

REPORT_KEY = "report.json"
REPORT_MARKDOWN = "report.md"


@click.command("bench")  # type: ignore[misc]
@click.option(  # type: ignore[misc]
    "--dataset",
    "dataset_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="JSON lines dataset",
)
@click.option(  # type: ignore[misc]
    "--concurrency",
    type=click.IntRange(min=1),
    default=consts.compute.DEFAULT_CONCURRENCY,
    show_default=True,
    help="Number of instances processed in parallel",
)
@click.option(  # type: ignore[misc]
    "--resume",
    is_flag=True,
    default=False,
    help="Skip instances that already have a scores document in --out",
)
@click.option(  # type: ignore[misc]
    "--per-round",
    is_flag=True,
    default=False,
    help="Also score the image after every round and report the mean Score per round",
)
@click.option(  # type: ignore[misc]
    "--reference-images",
    is_flag=True,
    default=False,
    help="Score each instance's reference image instead of running the pipeline",
)
@click.option(  # type: ignore[misc]
    "--format",
    "fmt",
    type=click.Choice(["markdown", "json"]),
    default="markdown",
    show_default=True,
    help="Format of the report printed to stdout",
)
@click.option(  # type: ignore[misc]
    "--live-smoke",
    is_flag=True,
    default=False,
    help="Run the first instance only, against the real endpoints of --config (needs SHOWTABLE_LIVE=1)",
)
@config_options
@pipeline_options
@out_option
def run_benchmark(  # noqa: PLR0913
    dataset_path: Path,
    concurrency: int,
    fmt: str,
    config_path: Path | None,
    max_rounds: int | None,
    mode: PipelineMode | None,
    out: Path,
    *,
    resume: bool = False,
    per_round: bool = False,
    reference_images: bool = False,
    live_smoke: bool = False,
    mock: bool = False,
) -> None:
    """Runs the pipeline and the judge over every dataset instance and prints the report."""
    require_live(live_smoke=live_smoke, mock=mock)
    cfg = load_app_config(config_path, mock=mock, max_rounds=max_rounds, mode=mode)
    try:
        dataset = load_dataset(dataset_path)
    except DatasetError as ex:
        raise BadInput(str(ex)) from ex
    if live_smoke:
        dataset = dataset.model_copy(update={"instances": dataset.instances[:1]})

    store = open_store(out)
    report = run_bench(
        dataset,
        cfg.pipeline,
        cfg.judge,
        store,
        concurrency,
        resume=resume,
        per_round=per_round,
        reference_images=reference_images,
    )
    store.write_document(REPORT_KEY, report)
    (out / REPORT_MARKDOWN).write_text(emit_report(report, "markdown"), encoding="utf-8")
    click.echo(emit_report(report, "json" if fmt == "json" else "markdown"), nl=False)

    if not report.ok:
        _logger.error("%d of %d instances failed", len(report.failures), len(dataset.instances))
        sys.exit(EXIT_FAILURES)
