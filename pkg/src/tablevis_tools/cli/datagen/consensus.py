"""Consensus filtering of table annotations."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, Any

import click
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from tablevis_tools.cli.common import BadInput, config_options, load_app_config, open_store, out_option, read_jsonl
from tablevis_tools.cli.datagen.common import batch_option, input_option, read_image, write_batch
from tablevis_tools.core.exceptions import BackendError
from tablevis_tools.datagen import (
    SkipRecord,
    consensus_filter,
    mutual_approval,
    resolution_filter,
    statistical_screen,
)
from tablevis_tools.tables import serialize_markdown
from tablevis_tools.utils.logging import get_logger

if TYPE_CHECKING:
    from tablevis_tools.backends import ImageBlob
    from tablevis_tools.core.config import AppConfig

_logger = get_logger(__name__)


class AnnotationPair(BaseModel):
    """Input line: two independent annotations of one source image."""

    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1)
    annotation_a: str
    annotation_b: str
    image_path: str | None = None


SKIP_DISAGREE = "annotations disagree"


def _judge_checks(
    item: AnnotationPair,
    table_markdown: str,
    image: ImageBlob,
    cfg: AppConfig,
    *,
    screen: bool,
    mutual_approval_pass: bool,
) -> str | None:
    """Runs the optional judge checks. Returns the rejection reason, `None` when the item passes."""
    templates_dir = cfg.judge.templates_dir
    if screen and not statistical_screen(table_markdown, image, cfg.judge.judge, templates_dir):
        return "statistical data is not the main body"
    if (
        mutual_approval_pass
        and cfg.judge_secondary is not None
        and not mutual_approval(
            item.annotation_a, item.annotation_b, image, cfg.judge.judge, cfg.judge_secondary, templates_dir
        )
    ):
        return "annotations not mutually approved"
    return None


def filter_item(
    item: AnnotationPair,
    base_dir: Path,
    cfg: AppConfig | None,
    *,
    screen: bool = False,
    mutual_approval_pass: bool = False,
) -> dict[str, Any] | SkipRecord:
    """Filters one annotation pair into a consensus record or a skip record."""
    image = read_image(item.image_path, base_dir) if item.image_path else None
    if (
        image is not None
        and image.width is not None
        and image.height is not None
        and not resolution_filter(image.width, image.height)
    ):
        return SkipRecord(item_id=item.id, reason=f"resolution {image.width}x{image.height}")
    grid = consensus_filter(item.annotation_a, item.annotation_b)
    if grid is None:
        return SkipRecord(item_id=item.id, reason=SKIP_DISAGREE)
    table_markdown = serialize_markdown(grid)

    if cfg is not None:
        if image is None:
            return SkipRecord(item_id=item.id, reason="judge checks need an image")
        try:
            reason = _judge_checks(
                item, table_markdown, image, cfg, screen=screen, mutual_approval_pass=mutual_approval_pass
            )
        except BackendError as ex:
            _logger.warning("Judge check of %s failed: %s", item.id, ex)
            reason = f"{type(ex).__name__}: {ex}"
        if reason is not None:
            return SkipRecord(item_id=item.id, reason=reason)
    return {"id": item.id, "table_markdown": table_markdown}


@click.command("consensus")  # type: ignore[misc]
@input_option
@click.option(  # type: ignore[misc]
    "--screen",
    is_flag=True,
    default=False,
    help="Ask the judge whether statistical data is the main body of each image",
)
@click.option(  # type: ignore[misc]
    "--mutual-approval",
    "mutual_approval_pass",
    is_flag=True,
    default=False,
    help="Also ask each annotator judge to approve the other's table (needs judge_secondary)",
)
@config_options
@batch_option
@out_option
def datagen_consensus(
    input_path: Path,
    config_path: Path | None,
    batch: str,
    out: Path,
    *,
    screen: bool = False,
    mutual_approval_pass: bool = False,
    mock: bool = False,
) -> None:
    """Keeps the tables on which both annotations agree cell by cell."""
    items = read_jsonl(input_path, AnnotationPair)
    needs_judges = screen or mutual_approval_pass
    cfg = load_app_config(config_path, mock=mock) if needs_judges else None
    if cfg is not None and mutual_approval_pass and cfg.judge_secondary is None:
        msg = "--mutual-approval needs a judge_secondary backend in the config"
        raise BadInput(msg)
    store = open_store(out)

    records: list[dict[str, Any]] = []
    skips: list[SkipRecord] = []
    for item in tqdm(items, desc="Filtering annotations", unit="item"):
        result = filter_item(item, input_path.parent, cfg, screen=screen, mutual_approval_pass=mutual_approval_pass)
        if isinstance(result, SkipRecord):
            skips.append(result)
        else:
            records.append(result)

    write_batch(store, "consensus", batch, records, skips)
