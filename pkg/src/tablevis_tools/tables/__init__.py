#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Markdown table parsing, canonicalization and data-point counting."""

from __future__ import annotations

from tablevis_tools.tables.cells import Cell, canonicalize_cell
from tablevis_tools.tables.markdown import (
    parse_markdown_table,
    parse_markdown_table_with_warnings,
    serialize_markdown,
)
from tablevis_tools.tables.models import TableGrid, TableInstance, count_data_points

__all__ = [
    "Cell",
    "TableGrid",
    "TableInstance",
    "canonicalize_cell",
    "count_data_points",
    "parse_markdown_table",
    "parse_markdown_table_with_warnings",
    "serialize_markdown",
]
