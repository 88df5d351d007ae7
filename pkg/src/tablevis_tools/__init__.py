"""Table visualization tools main entrypoint."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
from __future__ import annotations

import click

from tablevis_tools.cli.bench.bench import run_benchmark
from tablevis_tools.cli.bench.evaluate import eval_image
from tablevis_tools.cli.bench.report import render_report
from tablevis_tools.cli.bench.run import run_single
from tablevis_tools.cli.bench.stats import dataset_stats
from tablevis_tools.cli.datagen.consensus import datagen_consensus
from tablevis_tools.cli.datagen.pairs import datagen_pairs
from tablevis_tools.cli.datagen.rewrite import datagen_rewrite
from tablevis_tools.cli.datagen.rollout import datagen_rollout
from tablevis_tools.cli.store.verify import verify_run_store


@click.group()  # type: ignore[misc]
def cli() -> None:
    """Main entrypoint for CLI."""


@cli.group("datagen")  # type: ignore[misc]
def cli_datagen() -> None:
    """Training data construction."""


cli.add_command(run_single)
cli.add_command(run_benchmark)
cli.add_command(eval_image)
cli.add_command(dataset_stats)
cli.add_command(render_report)
cli.add_command(verify_run_store)
cli_datagen.add_command(datagen_consensus)
cli_datagen.add_command(datagen_rewrite)
cli_datagen.add_command(datagen_rollout)
cli_datagen.add_command(datagen_pairs)


if __name__ == "__main__":
    cli()
