"""Options shared by the data construction commands."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

import click

from tablevis_tools.backends import ImageBlob
from tablevis_tools.cli.common import BadInput, resolve_path
from tablevis_tools.datagen import SkipRecord, datagen_key
from tablevis_tools.runstore import is_safe_segment

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence
    from typing import Any

    from pydantic import BaseModel

    from tablevis_tools.runstore import RunStore


def input_option(fn: Callable[..., Any]) -> Callable[..., Any]:
    """Adds `--input`."""
    return click.option(  # type: ignore[no-any-return]
        "--input",
        "input_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        required=True,
        help="JSON lines input file; relative image paths are resolved against its directory",
    )(fn)


def _check_batch(_ctx: click.Context, _param: click.Parameter, value: str) -> str:
    if not is_safe_segment(value):
        msg = f"{value!r} cannot be used as a file name"
        raise click.BadParameter(msg)
    return value


def batch_option(fn: Callable[..., Any]) -> Callable[..., Any]:
    """Adds `--batch`."""
    return click.option(  # type: ignore[no-any-return]
        "--batch",
        default="batch",
        show_default=True,
        callback=_check_batch,
        help="Output batch name; records land in datagen/<pipeline>/<batch>.jsonl under --out",
    )(fn)


def read_image(path: str, base_dir: Path) -> ImageBlob:
    """Reads an image referenced by an input line."""
    resolved = resolve_path(path, base_dir)
    try:
        return ImageBlob.from_file(resolved)
    except OSError as ex:
        msg = f"Cannot read image {resolved.as_posix()}: {ex}"
        raise BadInput(msg) from ex


def write_batch(
    store: RunStore,
    pipeline: str,
    batch: str,
    records: Sequence[BaseModel | dict[str, Any]],
    skips: Sequence[SkipRecord],
) -> None:
    """Writes the output records of a batch and, when any, its skip records, then prints a summary."""
    store.write_records(datagen_key(pipeline, batch), records)
    if skips:
        store.write_records(datagen_key(pipeline, f"{batch}-skipped"), skips)
    click.echo(f"{pipeline}: wrote {len(records)} record(s), skipped {len(skips)}")
