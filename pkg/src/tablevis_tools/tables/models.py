#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Table data models."""

from __future__ import annotations

from typing import Self

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveInt, model_validator

from tablevis_tools.tables.cells import canonicalize_cell


class TableGrid(BaseModel):
    """A rectangular table: header cells plus body rows, all of `column_count` cells.

    At least one header cell holds text, matching what the markdown parser accepts.
    """

    model_config = ConfigDict(frozen=True)

    header: tuple[str, ...]
    body: tuple[tuple[str, ...], ...] = ()
    column_count: PositiveInt

    @model_validator(mode="after")
    def _check_shape(self) -> Self:
        if len(self.header) != self.column_count:
            msg = f"header has {len(self.header)} cells, expected {self.column_count}"
            raise ValueError(msg)
        if not any(self.header):
            msg = "header has no non-empty cell"
            raise ValueError(msg)
        for idx, row in enumerate(self.body):
            if len(row) != self.column_count:
                msg = f"body row {idx} has {len(row)} cells, expected {self.column_count}"
                raise ValueError(msg)
        return self

    @classmethod
    def of(cls, header: list[str] | tuple[str, ...], body: list[list[str]] | None = None) -> TableGrid:
        """Builds a grid whose column count is taken from the header.

        Args:
            header: The header cells.
            body: The body rows.

        Returns:
            The grid.

        """
        return cls(
            header=tuple(header),
            body=tuple(tuple(row) for row in body or []),
            column_count=len(header),
        )


def count_data_points(grid: TableGrid) -> int:
    """Counts the key data points of a table.

    The count is the number of body cells holding a finite decimal. Purely categorical tables fall back to the
    number of non-empty body cells.

    Args:
        grid: The table.

    Returns:
        The number of data points.

    """
    cells = [canonicalize_cell(raw) for row in grid.body for raw in row]
    numeric = sum(1 for cell in cells if cell.numeric_value is not None)
    if numeric:
        return numeric
    return sum(1 for cell in cells if cell.canonical)


class TableInstance(BaseModel):
    """A parsed source table with its identity and topic; the unit of work of pipeline and benchmark."""

    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1)
    topic: str = ""
    grid: TableGrid
    source_markdown: str
    n_total: NonNegativeInt
    reference_image: str | None = None
    """Path of the ground-truth image, if any."""

    @model_validator(mode="after")
    def _check_n_total(self) -> Self:
        expected = count_data_points(self.grid)
        if self.n_total != expected:
            msg = f"n_total is {self.n_total} but the table holds {expected} data points"
            raise ValueError(msg)
        return self

    @classmethod
    def from_markdown(
        cls,
        instance_id: str,
        markdown: str,
        topic: str = "",
        reference_image: str | None = None,
    ) -> TableInstance:
        """Parses a markdown table into an instance.

        Args:
            instance_id: Unique instance id.
            markdown: The markdown table.
            topic: Free text topic.
            reference_image: Optional ground-truth image path.

        Returns:
            The instance.

        """
        from tablevis_tools.tables.markdown import parse_markdown_table

        grid = parse_markdown_table(markdown)
        return cls(
            id=instance_id,
            topic=topic,
            grid=grid,
            source_markdown=markdown,
            n_total=count_data_points(grid),
            reference_image=reference_image,
        )
