#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Options and helpers shared by the CLI commands."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, Any, TypeVar

import click
from pydantic import BaseModel, ValidationError

from tablevis_tools.core import consts
from tablevis_tools.core.config import AppConfig, PipelineMode
from tablevis_tools.core.exceptions import ConfigError, DatasetError
from tablevis_tools.core.settings import current_settings
from tablevis_tools.runstore import RunStore
from tablevis_tools.utils.logging import configure_package_logging

if TYPE_CHECKING:
    from collections.abc import Callable


F = TypeVar("F", bound="Callable[..., Any]")
M = TypeVar("M", bound=BaseModel)

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_BAD_INPUT = 2


class BadInput(click.ClickException):
    """Configuration or dataset problem. Exits with code 2."""

    exit_code = EXIT_BAD_INPUT


def config_options(fn: F) -> F:
    """Adds `--config` and `--mock`."""
    fn = click.option(
        "--mock",
        is_flag=True,
        default=False,
        help="Use scripted offline backends for every role instead of a config file",
    )(fn)
    return click.option(
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        default=None,
        help="Run configuration JSON with one backend section per role",
    )(fn)


def pipeline_options(fn: F) -> F:
    """Adds `--max-rounds` and `--mode`."""
    fn = click.option(
        "--mode",
        type=click.Choice(["full", "rewrite_only", "direct"]),
        default=None,
        help="Pipeline mode, overrides the config  [default: full]",
    )(fn)
    return click.option(
        "--max-rounds",
        type=click.IntRange(min=1),
        default=None,
        help=f"Maximum reflect/refine rounds, overrides the config  [default: {consts.pipeline.MAX_ROUNDS}]",
    )(fn)


def out_option(fn: F) -> F:
    """Adds `--out`."""
    return click.option(
        "--out",
        type=click.Path(file_okay=False, path_type=Path),
        required=True,
        help="Run store directory for images, run documents, reports and the log file",
    )(fn)


def load_app_config(
    config_path: Path | None,
    *,
    mock: bool,
    max_rounds: int | None = None,
    mode: PipelineMode | None = None,
) -> AppConfig:
    """Loads the run configuration selected on the command line.

    Raises:
        BadInput: When neither `--config` nor `--mock` is given, or the config does not validate.

    """
    if mock:
        cfg = AppConfig.mock()
    elif config_path is None:
        msg = "--config is required unless --mock is given"
        raise BadInput(msg)
    else:
        try:
            cfg = AppConfig.from_file(config_path)
        except ConfigError as ex:
            raise BadInput(str(ex)) from ex

    overrides: dict[str, Any] = {}
    if max_rounds is not None:
        overrides["max_rounds"] = max_rounds
    if mode is not None:
        overrides["mode"] = mode
    if overrides:
        cfg = cfg.model_copy(update={"pipeline": cfg.pipeline.model_copy(update=overrides)})
    return cfg


def open_store(out: Path) -> RunStore:
    """Opens the run store under `--out` and routes the package logs to a file inside it."""
    out.mkdir(parents=True, exist_ok=True)
    configure_package_logging(current_settings().log_level, out / consts.logging.LOG_FILE_NAME)
    return RunStore(out)


def require_live(*, live_smoke: bool, mock: bool) -> None:
    """Guards `--live-smoke`: live endpoints must be allowed by the environment and mocks are not live."""
    if not live_smoke:
        return
    if mock:
        msg = "--live-smoke cannot be combined with --mock"
        raise BadInput(msg)
    if not current_settings().live:
        msg = "--live-smoke requires SHOWTABLE_LIVE=1 (or TABLEVIS_LIVE=1)"
        raise BadInput(msg)


def read_jsonl(path: Path, model: type[M]) -> list[M]:
    """Reads a JSON lines input file into models. Blank lines are skipped.

    Raises:
        BadInput: On unreadable files and invalid lines, naming the line.

    """
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as ex:
        msg = f"Cannot read {path.as_posix()}: {ex}"
        raise BadInput(msg) from ex

    records = []
    for line_no, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            records.append(model.model_validate_json(raw))
        except ValidationError as ex:
            error = DatasetError(f"invalid record: {ex.errors()[0]['msg']}", line=line_no)
            msg = f"{path.as_posix()}: {error}"
            raise BadInput(msg) from ex
    return records


def resolve_path(path: str, base_dir: Path) -> Path:
    """Resolves a path from an input file relative to that file's directory."""
    candidate = Path(path)
    return candidate if candidate.is_absolute() else base_dir / candidate
