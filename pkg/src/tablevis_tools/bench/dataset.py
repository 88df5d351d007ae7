#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Benchmark dataset loading.

A dataset is a UTF-8 JSON lines file, one instance per line:

```json
{"id": "t-001", "topic": "energy mix", "table_markdown": "| Source | Share |\\n|---|---|\\n| Coal | 36 |"}
```

`reference_image_path` is optional and resolved relative to the dataset file.
"""

from __future__ import annotations

from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from tablevis_tools.core.exceptions import DatasetError, MalformedTableError, NotATableError
from tablevis_tools.runstore import is_safe_segment
from tablevis_tools.tables import TableInstance, count_data_points, parse_markdown_table_with_warnings
from tablevis_tools.utils.logging import get_logger, timing_context

_logger = get_logger(__name__)


class DatasetLine(BaseModel):
    """One line of a dataset file."""

    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1)
    topic: str = ""
    table_markdown: str
    reference_image_path: str | None = None


class BenchDataset(BaseModel):
    """Parsed benchmark instances with unique ids."""

    model_config = ConfigDict(frozen=True)

    instances: tuple[TableInstance, ...]
    source_path: Path
    warnings: dict[str, tuple[str, ...]] = Field(default_factory=dict)
    """Table repair warnings by instance id."""

    @property
    def ids(self) -> list[str]:
        """Instance ids in file order."""
        return [instance.id for instance in self.instances]


def _parse_line(raw: str, line_no: int, base_dir: Path) -> tuple[TableInstance, list[str]]:
    try:
        record = DatasetLine.model_validate_json(raw)
    except ValidationError as ex:
        first = ex.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        msg = f"invalid record{f' at {location}' if location else ''}: {first['msg']}"
        raise DatasetError(msg, line=line_no) from ex

    if not is_safe_segment(record.id):
        msg = f"id {record.id!r} cannot be used as a path segment"
        raise DatasetError(msg, line=line_no)

    try:
        grid, warnings = parse_markdown_table_with_warnings(record.table_markdown)
    except (MalformedTableError, NotATableError) as ex:
        msg = f"table of {record.id!r} does not parse: {ex}"
        raise DatasetError(msg, line=line_no) from ex

    reference_image = None
    if record.reference_image_path:
        reference_path = Path(record.reference_image_path)
        if not reference_path.is_absolute():
            reference_path = base_dir / reference_path
        reference_image = reference_path.as_posix()

    instance = TableInstance(
        id=record.id,
        topic=record.topic,
        grid=grid,
        source_markdown=record.table_markdown,
        n_total=count_data_points(grid),
        reference_image=reference_image,
    )
    return instance, warnings


def load_dataset(path: Path) -> BenchDataset:
    """Loads a JSON lines benchmark dataset. Blank lines are skipped.

    Args:
        path: The dataset file.

    Returns:
        The dataset. Ragged tables are repaired and their warnings kept per instance id.

    Raises:
        DatasetError: If the file cannot be read, or a line is not a valid record, holds an unusable id,
            repeats an earlier id or carries a table that does not parse. The error names the line.

    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as ex:
        msg = f"Cannot read dataset {path.as_posix()}: {ex}"
        raise DatasetError(msg) from ex

    instances: list[TableInstance] = []
    warnings: dict[str, tuple[str, ...]] = {}
    seen: dict[str, int] = {}
    with timing_context(f"load_dataset({path.name})"):
        for line_no, raw in enumerate(text.splitlines(), start=1):
            if not raw.strip():
                continue
            instance, instance_warnings = _parse_line(raw, line_no, path.parent)
            if instance.id in seen:
                msg = f"duplicate id {instance.id!r}, first seen on line {seen[instance.id]}"
                raise DatasetError(msg, line=line_no)
            seen[instance.id] = line_no
            instances.append(instance)
            if instance_warnings:
                warnings[instance.id] = tuple(instance_warnings)

    _logger.info(
        "Loaded %d instances from %s (%d with repaired tables)", len(instances), path.as_posix(), len(warnings)
    )
    return BenchDataset(instances=tuple(instances), source_path=path, warnings=warnings)
