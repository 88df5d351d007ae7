#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Source data filters: resolution, annotation consensus, statistical content screening and mutual approval."""

from __future__ import annotations

import re
from typing import TYPE_CHECKING

from tablevis_tools.backends import chat_complete
from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import MalformedTableError, NotATableError
from tablevis_tools.pipeline.stages import build_messages
from tablevis_tools.pipeline.templates import load_template
from tablevis_tools.tables import TableGrid, canonicalize_cell, parse_markdown_table
from tablevis_tools.utils.logging import get_logger

if TYPE_CHECKING:
    from pathlib import Path

    from tablevis_tools.backends import ImageBlob
    from tablevis_tools.core.config import BackendConfig

_logger = get_logger(__name__)

_YES_NO_RE = re.compile(r"\b(YES|NO)\b", re.IGNORECASE)


def resolution_filter(width: int, height: int) -> bool:
    """Keeps images whose sides are both at least 200 pixels."""
    return width >= consts.pipeline.MIN_RESOLUTION and height >= consts.pipeline.MIN_RESOLUTION


def _parse_quietly(annotation: str) -> TableGrid | None:
    try:
        return parse_markdown_table(annotation)
    except (MalformedTableError, NotATableError) as ex:
        _logger.info("Annotation is not a usable table: %s", ex)
        return None


def consensus_filter(annot_a: str, annot_b: str) -> TableGrid | None:
    """Accepts a table only when two independent annotations agree cell by cell.

    Cells are compared after canonicalization: numbers by value (`1.50 == 1.5`), text trimmed and
    case-folded.

    Args:
        annot_a: First annotator's markdown table.
        annot_b: Second annotator's markdown table.

    Returns:
        The canonical grid when both annotations agree, otherwise `None`. Unparseable annotations count as
        disagreement.

    """
    grid_a, grid_b = _parse_quietly(annot_a), _parse_quietly(annot_b)
    if grid_a is None or grid_b is None:
        return None
    if grid_a.column_count != grid_b.column_count or len(grid_a.body) != len(grid_b.body):
        return None

    rows_a = [grid_a.header, *grid_a.body]
    rows_b = [grid_b.header, *grid_b.body]
    for row_a, row_b in zip(rows_a, rows_b, strict=True):
        for cell_a, cell_b in zip(row_a, row_b, strict=True):
            if canonicalize_cell(cell_a).key != canonicalize_cell(cell_b).key:
                return None

    canonical_rows = [[canonicalize_cell(cell).canonical for cell in row] for row in rows_a]
    return TableGrid.of(canonical_rows[0], canonical_rows[1:])


def parse_yes_no(text: str) -> bool | None:
    """Reads the last YES or NO in a reply. Returns `None` when there is none."""
    matches = _YES_NO_RE.findall(text)
    if not matches:
        return None
    return matches[-1].upper() == "YES"


def _ask_yes_no(
    template_name: str,
    table_markdown: str,
    image: ImageBlob,
    backend: BackendConfig,
    templates_dir: Path | None,
) -> bool:
    template = load_template(template_name, templates_dir)
    messages = build_messages(template, {"TABLE_MARKDOWN": table_markdown}, images=[image])
    reply = chat_complete(backend, messages)
    answer = parse_yes_no(reply)
    if answer is None:
        _logger.warning("No YES/NO in %s reply, treating it as NO: %r", template_name, reply[:200])
        return False
    return answer


def statistical_screen(
    table_markdown: str,
    image: ImageBlob,
    judge_backend: BackendConfig,
    templates_dir: Path | None = None,
) -> bool:
    """Asks the judge whether statistical data is the main body of the image.

    Args:
        table_markdown: The extracted table.
        image: The source image.
        judge_backend: The judge.
        templates_dir: Optional template directory override.

    Returns:
        Whether the image passes. Replies without YES or NO fail.

    """
    return _ask_yes_no("screen", table_markdown, image, judge_backend, templates_dir)


def mutual_approval(
    annot_a: str,
    annot_b: str,
    image: ImageBlob,
    judge_a: BackendConfig,
    judge_b: BackendConfig,
    templates_dir: Path | None = None,
) -> bool:
    """Cross-check pass: each annotator model is asked to approve the other's annotation.

    Args:
        annot_a: Annotation produced by the model behind `judge_a`.
        annot_b: Annotation produced by the model behind `judge_b`.
        image: The annotated image.
        judge_a: First annotator model.
        judge_b: Second annotator model.
        templates_dir: Optional template directory override.

    Returns:
        Whether both approvals were granted.

    """
    return _ask_yes_no("approve", annot_b, image, judge_a, templates_dir) and _ask_yes_no(
        "approve", annot_a, image, judge_b, templates_dir
    )
