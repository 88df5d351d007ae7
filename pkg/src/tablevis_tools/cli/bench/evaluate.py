"""Scoring an existing image against a table."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
from __future__ import annotations

import sys
from pathlib import Path

import click

from tablevis_tools.backends import ImageBlob
from tablevis_tools.cli.bench.run import load_table
from tablevis_tools.cli.common import EXIT_FAILURES, BadInput, config_options, load_app_config, open_store, out_option
from tablevis_tools.core.exceptions import EvaluationError
from tablevis_tools.judge import evaluate_instance
from tablevis_tools.utils.logging import get_logger
from tablevis_tools.utils.serialization import dumps_document

_logger = get_logger(__name__)


@click.command("eval")  # type: ignore[misc]
@click.option(  # type: ignore[misc]
    "--table",
    "table_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="Markdown file holding the table",
)
@click.option(  # type: ignore[misc]
    "--image",
    "image_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="The image to score",
)
@click.option(  # type: ignore[misc]
    "--id",
    "instance_id",
    default=None,
    help="Instance id, defaults to the table file stem",
)
@config_options
@out_option
def eval_image(
    table_path: Path,
    image_path: Path,
    instance_id: str | None,
    config_path: Path | None,
    out: Path,
    *,
    mock: bool = False,
) -> None:
    """Audits an image in every dimension and prints its scores."""
    cfg = load_app_config(config_path, mock=mock)
    table = load_table(table_path, instance_id, topic="")
    try:
        image = ImageBlob.from_file(image_path)
    except OSError as ex:
        msg = f"Cannot read {image_path.as_posix()}: {ex}"
        raise BadInput(msg) from ex

    store = open_store(out)
    try:
        result = evaluate_instance(table, image, cfg.judge, store)
    except EvaluationError as ex:
        _logger.exception("Evaluation of %s failed", table.id)
        click.echo(f"Evaluation failed: {ex}", err=True)
        sys.exit(EXIT_FAILURES)
    click.echo(dumps_document(result.document().model_dump(mode="json")), nl=False)
