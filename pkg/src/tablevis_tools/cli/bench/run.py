"""Single instance pipeline run."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
from __future__ import annotations

import sys
from pathlib import Path
from typing import TYPE_CHECKING

import click

from tablevis_tools.backends import ImageBlob
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
from tablevis_tools.core.exceptions import EvaluationError, MalformedTableError, NotATableError, PipelineRunError
from tablevis_tools.judge import evaluate_instance
from tablevis_tools.pipeline import run_pipeline
from tablevis_tools.runstore import is_safe_segment
from tablevis_tools.tables import TableInstance
from tablevis_tools.utils.logging import get_logger
from tablevis_tools.utils.serialization import dumps_document

if TYPE_CHECKING:
    from tablevis_tools.core.config import PipelineMode

_logger = get_logger(__name__)


def load_table(table_path: Path, instance_id: str | None, topic: str) -> TableInstance:
    """Reads a markdown table file into an instance.

    Args:
        table_path: The markdown file.
        instance_id: The instance id. The file stem is used when not provided.
        topic: Free text topic.

    Returns:
        The instance.

    Raises:
        BadInput: On unusable ids and files without a table.

    """
    instance_id = instance_id or table_path.stem
    if not is_safe_segment(instance_id):
        msg = f"Instance id {instance_id!r} cannot be used as a path segment"
        raise BadInput(msg)
    try:
        return TableInstance.from_markdown(instance_id, table_path.read_text(encoding="utf-8"), topic=topic)
    except (MalformedTableError, NotATableError) as ex:
        msg = f"{table_path.as_posix()} does not hold a markdown table: {ex}"
        raise BadInput(msg) from ex


@click.command("run")  # type: ignore[misc]
@click.option(  # type: ignore[misc]
    "--table",
    "table_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="Markdown file holding the table",
)
@click.option(  # type: ignore[misc]
    "--id",
    "instance_id",
    default=None,
    help="Instance id, defaults to the table file stem",
)
@click.option("--topic", default="", help="Free text topic passed to the rewriting stage")  # type: ignore[misc]
@click.option(  # type: ignore[misc]
    "--skip-eval",
    is_flag=True,
    default=False,
    help="Only run the pipeline, do not score the final image",
)
@click.option(  # type: ignore[misc]
    "--live-smoke",
    is_flag=True,
    default=False,
    help="Run against the real endpoints of --config (needs SHOWTABLE_LIVE=1)",
)
@config_options
@pipeline_options
@out_option
def run_single(
    table_path: Path,
    instance_id: str | None,
    topic: str,
    config_path: Path | None,
    max_rounds: int | None,
    mode: PipelineMode | None,
    out: Path,
    *,
    skip_eval: bool = False,
    live_smoke: bool = False,
    mock: bool = False,
) -> None:
    """Runs the pipeline for one table and scores the final image."""
    require_live(live_smoke=live_smoke, mock=mock)
    cfg = load_app_config(config_path, mock=mock, max_rounds=max_rounds, mode=mode)
    table = load_table(table_path, instance_id, topic)
    store = open_store(out)

    summary: dict[str, object] = {"instance_id": table.id}
    try:
        record = run_pipeline(table, cfg.pipeline, store)
        summary.update(
            termination=record.termination,
            refinements=record.refine_count,
            initial_image=record.initial_image,
            final_image=record.final_image,
        )
        if not skip_eval and record.final_image is not None:
            image = ImageBlob.from_bytes(store.get_blob(record.final_image))
            summary["scores"] = evaluate_instance(table, image, cfg.judge, store).scores.model_dump()
    except (PipelineRunError, EvaluationError) as ex:
        _logger.exception("Run of %s failed", table.id)
        summary["failure"] = f"{type(ex).__name__}: {ex}"
        click.echo(dumps_document(summary), nl=False)
        sys.exit(EXIT_FAILURES)
    click.echo(dumps_document(summary), nl=False)
