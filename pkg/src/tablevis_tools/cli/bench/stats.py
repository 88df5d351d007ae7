"""Dataset statistics."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
from __future__ import annotations

from pathlib import Path

import click

from tablevis_tools.bench import load_dataset, stats
from tablevis_tools.cli.common import BadInput
from tablevis_tools.core.exceptions import DatasetError
from tablevis_tools.tables import TableGrid, serialize_markdown
from tablevis_tools.utils.serialization import dumps_document


@click.command("stats")  # type: ignore[misc]
@click.option(  # type: ignore[misc]
    "--dataset",
    "dataset_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="JSON lines dataset",
)
@click.option(  # type: ignore[misc]
    "--format",
    "fmt",
    type=click.Choice(["markdown", "json"]),
    default="markdown",
    show_default=True,
    help="Output format",
)
def dataset_stats(dataset_path: Path, fmt: str) -> None:
    """Prints the distribution of data point counts over the dataset."""
    try:
        dataset = load_dataset(dataset_path)
    except DatasetError as ex:
        raise BadInput(str(ex)) from ex

    buckets = stats(dataset)
    if fmt == "json":
        click.echo(dumps_document([bucket.model_dump() for bucket in buckets]), nl=False)
        return
    grid = TableGrid.of(["Data points", "Instances"], [[bucket.label, str(bucket.count)] for bucket in buckets])
    click.echo(serialize_markdown(grid))
