"""Run store integrity check."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
from __future__ import annotations

import sys
from pathlib import Path

import click

from tablevis_tools.cli.common import EXIT_FAILURES
from tablevis_tools.runstore import RunStore, verify_store
from tablevis_tools.utils.logging import get_logger

_logger = get_logger(__name__)


@click.command("verify-store")  # type: ignore[misc]
@click.option(  # type: ignore[misc]
    "--out",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    required=True,
    help="Run store directory to check",
)
def verify_run_store(out: Path) -> None:
    """Re-hashes every blob and checks every blob reference of the run documents."""
    violations = verify_store(RunStore(out))
    if not violations:
        _logger.info("No integrity problems found in %s", out.as_posix())
        click.echo("OK")
        return

    for violation in violations:
        click.echo(f"{violation.kind}\t{violation.path}\t{violation.detail}")
    _logger.error("Found %d integrity problem(s) in %s", len(violations), out.as_posix())
    sys.exit(EXIT_FAILURES)
