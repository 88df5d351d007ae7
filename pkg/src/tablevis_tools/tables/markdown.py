#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Pipe-delimited markdown table parsing and canonical serialization."""

from __future__ import annotations

import re

from tablevis_tools.core.exceptions import MalformedTableError, NotATableError
from tablevis_tools.tables.models import TableGrid
from tablevis_tools.utils.logging import get_logger

_logger = get_logger(__name__)

_SEPARATOR_CELL_RE = re.compile(r":?-+:?")
_CELL_SPLIT_RE = re.compile(r"(?<!\\)\|")


def _split_row(line: str) -> list[str]:
    """Splits one table line into trimmed cells. Outer pipes are optional, `\\|` is a literal pipe."""
    text = line.strip()
    if text.startswith("|"):
        text = text[1:]
    if text.endswith("|") and not text.endswith("\\|"):
        text = text[:-1]
    return [cell.strip().replace("\\|", "|") for cell in _CELL_SPLIT_RE.split(text)]


def _is_separator(line: str) -> bool:
    cells = _split_row(line)
    return bool(cells) and all(_SEPARATOR_CELL_RE.fullmatch(cell.replace(" ", "")) for cell in cells)


def parse_markdown_table_with_warnings(text: str) -> tuple[TableGrid, list[str]]:
    """Parses a markdown table and reports the row repairs that were applied.

    Args:
        text: A candidate pipe table: a header row, a separator row of dashes/colons and zero or more body rows.
            Prose before the header is skipped; the table ends at the first blank or pipe-less line.

    Returns:
        The grid and a list of warnings, one per padded or truncated body row.

    Raises:
        MalformedTableError: On empty input, a missing separator row or a header without cells.
        NotATableError: When no line contains a pipe.

    """
    lines = text.splitlines()
    if not any(line.strip() for line in lines):
        msg = "Empty table text"
        raise MalformedTableError(msg)

    start = next((idx for idx, line in enumerate(lines) if "|" in line), None)
    if start is None:
        msg = "Text contains no pipe-delimited lines"
        raise NotATableError(msg)

    header = _split_row(lines[start])
    if not any(header):
        msg = "Header row has no cells"
        raise MalformedTableError(msg)
    if start + 1 >= len(lines) or not _is_separator(lines[start + 1]):
        msg = "Missing separator row after the header"
        raise MalformedTableError(msg)

    column_count = len(header)
    warnings: list[str] = []
    body: list[tuple[str, ...]] = []
    for line in lines[start + 2 :]:
        if not line.strip() or "|" not in line:
            break
        row = _split_row(line)
        row_no = len(body) + 1
        if len(row) < column_count:
            warnings.append(f"body row {row_no} has {len(row)} cells, padded to {column_count}")
            row += [""] * (column_count - len(row))
        elif len(row) > column_count:
            warnings.append(f"body row {row_no} has {len(row)} cells, truncated to {column_count}")
            row = row[:column_count]
        body.append(tuple(row))

    for warning in warnings:
        _logger.warning("Ragged table: %s", warning)

    return TableGrid(header=tuple(header), body=tuple(body), column_count=column_count), warnings


def parse_markdown_table(text: str) -> TableGrid:
    """Parses a markdown table. Ragged rows are padded or truncated with a logged warning.

    Args:
        text: A candidate pipe table.

    Returns:
        The grid.

    Examples:
        >>> parse_markdown_table("| A | B |\\n|---|---|\\n| 1 | 2 |").body
        (('1', '2'),)

    """
    grid, _ = parse_markdown_table_with_warnings(text)
    return grid


def _format_row(cells: tuple[str, ...] | list[str]) -> str:
    return "| " + " | ".join(cell.replace("|", "\\|") for cell in cells) + " |"


def serialize_markdown(grid: TableGrid) -> str:
    """Serializes a grid into the canonical markdown form.

    Leading and trailing pipes, single space padding and a `---` separator per column. The output has no
    trailing newline and is byte-identical for equal grids.

    Args:
        grid: The grid.

    Returns:
        The markdown table.

    Examples:
        >>> serialize_markdown(TableGrid.of(["A"]))
        '| A |\\n| --- |'

    """
    lines = [_format_row(grid.header), _format_row(["---"] * grid.column_count)]
    lines.extend(_format_row(row) for row in grid.body)
    return "\n".join(lines)
