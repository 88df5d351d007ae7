#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

import json
from typing import TYPE_CHECKING

import pytest

from tablevis_tools.bench import load_dataset, stats
from tablevis_tools.core.exceptions import DatasetError

if TYPE_CHECKING:
    from pathlib import Path

_TABLE = "| A | B |\n|---|---|\n| 1 | 2 |"


def _write(path: Path, *records: dict[str, object] | str) -> Path:
    lines = [r if isinstance(r, str) else json.dumps(r) for r in records]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_fixture_dataset(fixtures_dir: Path) -> None:
    dataset = load_dataset(fixtures_dir / "dataset.jsonl")
    assert dataset.ids == ["energy-mix", "regional-sales", "survey", "cities"]
    assert [instance.n_total for instance in dataset.instances] == [4, 6, 2, 4]
    assert dataset.warnings == {
        "survey": ("body row 2 has 1 cells, padded to 2", "body row 3 has 3 cells, truncated to 2"),
    }
    assert dataset.instances[3].topic == ""


def test_fixture_histogram(fixtures_dir: Path) -> None:
    buckets = stats(load_dataset(fixtures_dir / "dataset.jsonl"))
    assert [b.label for b in buckets] == ["1-5", "5-10", "10-15", "15-20", "20-25", "25-30", "30-35", "35-40", "40+"]
    assert {b.label: b.count for b in buckets if b.count} == {"1-5": 3, "5-10": 1}


def test_minimal_record(tmp_path: Path) -> None:
    dataset = load_dataset(_write(tmp_path / "d.jsonl", {"id": "t-1", "topic": "x", "table_markdown": _TABLE}))
    assert dataset.ids == ["t-1"]
    assert dataset.instances[0].n_total == 2  # noqa: PLR2004


def test_reference_images_resolve_against_the_dataset(tmp_path: Path) -> None:
    record = {"id": "t1", "table_markdown": _TABLE, "reference_image_path": "images/t1.png"}
    dataset = load_dataset(_write(tmp_path / "d.jsonl", record))
    assert dataset.instances[0].reference_image == (tmp_path / "images" / "t1.png").as_posix()


@pytest.mark.parametrize(
    ("records", "line", "message"),
    [
        (({"id": "a", "table_markdown": _TABLE}, "{not json"), 2, "invalid record"),
        (({"topic": "x", "table_markdown": _TABLE},), 1, "invalid record at id"),
        (({"id": "../a", "table_markdown": _TABLE},), 1, "path segment"),
        (({"id": "a", "table_markdown": "no table"},), 1, "does not parse"),
        (({"id": "a", "table_markdown": _TABLE}, {"id": "a", "table_markdown": _TABLE}), 2, "first seen on line 1"),
    ],
)
def test_invalid_datasets(
    tmp_path: Path, records: tuple[dict[str, object] | str, ...], line: int, message: str
) -> None:
    with pytest.raises(DatasetError, match=message) as exc_info:
        load_dataset(_write(tmp_path / "d.jsonl", *records))
    assert exc_info.value.line == line
    assert str(exc_info.value).startswith(f"line {line}:")


def test_missing_dataset(tmp_path: Path) -> None:
    with pytest.raises(DatasetError, match="Cannot read"):
        load_dataset(tmp_path / "missing.jsonl")
