#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

import pytest
from pydantic import ValidationError

from tablevis_tools.tables import (
    TableGrid,
    TableInstance,
    count_data_points,
    parse_markdown_table,
    serialize_markdown,
)


@pytest.mark.parametrize(
    ("body", "expected"),
    [
        ([["Alice", "42%"], ["Bob", "7"]], 2),
        ([["yes", "no"]], 2),
        ([["yes", ""], ["", "no"]], 2),
        ([["", ""]], 0),
        ([], 0),
        ([["North", "1,234"], ["South", "N/A"]], 1),
    ],
)
def test_count_data_points(body: list[list[str]], expected: int) -> None:
    assert count_data_points(TableGrid.of(["Name", "Value"], body)) == expected


def test_header_cells_are_never_counted() -> None:
    assert count_data_points(TableGrid.of(["2021", "2022"])) == 0


def test_grid_rejects_ragged_rows() -> None:
    with pytest.raises(ValidationError):
        TableGrid(header=("A", "B"), body=(("1",),), column_count=2)


@pytest.mark.parametrize("header", [("",), ("", "")])
def test_grid_rejects_blank_header(header: tuple[str, ...]) -> None:
    with pytest.raises(ValidationError, match="no non-empty cell"):
        TableGrid.of(header)


def test_grid_accepts_partly_blank_header() -> None:
    grid = TableGrid.of(["", "Sales"], [["North", "10"]])
    assert parse_markdown_table(serialize_markdown(grid)) == grid


def test_instance_from_markdown() -> None:
    markdown = "| Year | Sales |\n|---|---|\n| 2021 | 10 |\n| 2022 | 12 |"
    instance = TableInstance.from_markdown("t1", markdown, topic="retail")
    assert instance.n_total == 4  # noqa: PLR2004
    assert instance.grid.column_count == 2  # noqa: PLR2004
    assert instance.topic == "retail"
    assert instance.reference_image is None


def test_instance_rejects_inconsistent_n_total() -> None:
    grid = TableGrid.of(["A"], [["1"]])
    with pytest.raises(ValidationError, match="n_total"):
        TableInstance(id="t1", grid=grid, source_markdown="", n_total=3)
