"""Report rendering."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
from __future__ import annotations

from pathlib import Path

import click
from pydantic import ValidationError

from tablevis_tools.bench import BenchReport, emit_report, load_report
from tablevis_tools.cli.common import BadInput


def _read(path: Path) -> BenchReport:
    try:
        return load_report(path.read_text(encoding="utf-8"))
    except (OSError, ValidationError) as ex:
        msg = f"{path.as_posix()} is not a benchmark report: {ex}"
        raise BadInput(msg) from ex


@click.command("report")  # type: ignore[misc]
@click.option(  # type: ignore[misc]
    "--report",
    "report_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="report.json written by `bench`",
)
@click.option(  # type: ignore[misc]
    "--baseline",
    "baseline_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Baseline report.json; adds an Improvement row to the markdown output",
)
@click.option(  # type: ignore[misc]
    "--format",
    "fmt",
    type=click.Choice(["markdown", "json"]),
    default="markdown",
    show_default=True,
    help="Output format",
)
def render_report(report_path: Path, baseline_path: Path | None, fmt: str) -> None:
    """Re-renders a saved benchmark report."""
    report = _read(report_path)
    baseline = _read(baseline_path) if baseline_path is not None else None
    click.echo(emit_report(report, "json" if fmt == "json" else "markdown", baseline=baseline), nl=False)
