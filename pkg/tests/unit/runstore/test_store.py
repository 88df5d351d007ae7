#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING
from unittest.mock import patch

import pytest
from pydantic import BaseModel

from tablevis_tools.core.exceptions import StoreError
from tablevis_tools.runstore import RunStore, is_safe_segment, verify_store
from tablevis_tools.runstore.store import STALE_TEMP_SECONDS

if TYPE_CHECKING:
    from pathlib import Path


class _Doc(BaseModel):
    name: str
    final_image: str | None = None


@pytest.fixture
def store(tmp_path: Path) -> RunStore:
    return RunStore(tmp_path / "out")


def test_blobs_are_content_addressed(store: RunStore) -> None:
    digest = store.put_blob(b"png bytes")
    assert digest == hashlib.sha256(b"png bytes").hexdigest()
    assert store.put_blob(b"png bytes") == digest
    assert store.get_blob(digest) == b"png bytes"
    assert store.has_blob(digest)
    assert len(list((store.root / "blobs").iterdir())) == 1


def test_missing_blob(store: RunStore) -> None:
    with pytest.raises(StoreError):
        store.get_blob("0" * 64)


def test_invalid_digest(store: RunStore) -> None:
    with pytest.raises(StoreError, match="digest"):
        store.blob_path("../etc/passwd")


def test_documents_are_stamped_and_validated(store: RunStore) -> None:
    store.write_document("runs/t1/run.json", _Doc(name="t1"))
    assert store.read_document("runs/t1/run.json")["schema_version"] == 1
    assert store.read_document("runs/t1/run.json", _Doc) == _Doc(name="t1")
    assert store.has_document("runs/t1/run.json")
    assert not store.has_document("runs/t2/run.json")


def test_last_writer_wins(store: RunStore) -> None:
    store.write_document("report.json", {"value": 1})
    store.write_document("report.json", {"value": 2})
    assert store.read_document("report.json")["value"] == 2  # noqa: PLR2004


@pytest.mark.parametrize("key", ["../escape.json", "runs/../x.json", "runs//x.json", "blobs/x.json", "runs/.tmp-x"])
def test_unsafe_keys_are_rejected(store: RunStore, key: str) -> None:
    with pytest.raises(StoreError, match="Invalid document key"):
        store.write_document(key, {})


@pytest.mark.parametrize(("segment", "expected"), [("t-1_a.b", True), ("", False), ("..", False), ("a b", False)])
def test_is_safe_segment(segment: str, expected: bool) -> None:  # noqa: FBT001
    assert is_safe_segment(segment) is expected


def test_failed_write_keeps_previous_content(store: RunStore) -> None:
    store.write_document("runs/t1/run.json", {"value": "old"})
    with patch("tablevis_tools.runstore.store.os.fsync", side_effect=OSError("disk full")), pytest.raises(StoreError):
        store.write_document("runs/t1/run.json", {"value": "new"})
    assert store.read_document("runs/t1/run.json")["value"] == "old"
    assert not list(store.root.rglob(".tmp-*"))


def test_stale_temp_files_are_removed_on_open(tmp_path: Path) -> None:
    root = tmp_path / "out"
    RunStore(root)
    (root / "runs").mkdir()
    leftover = root / "runs" / ".tmp-abc"
    leftover.write_bytes(b"partial")
    old = time.time() - STALE_TEMP_SECONDS - 60
    os.utime(leftover, (old, old))
    RunStore(root)
    assert not leftover.exists()


def test_fresh_temp_files_survive_open(tmp_path: Path) -> None:
    root = tmp_path / "out"
    RunStore(root)
    (root / "runs").mkdir()
    in_flight = root / "runs" / ".tmp-abc"
    in_flight.write_bytes(b"partial")
    RunStore(root)
    assert in_flight.exists()


def test_opening_a_store_does_not_break_a_write_in_flight(store: RunStore) -> None:
    real_fsync = os.fsync

    def open_second_store(fd: int) -> None:
        RunStore(store.root)
        real_fsync(fd)

    with patch("tablevis_tools.runstore.store.os.fsync", side_effect=open_second_store):
        store.write_document("runs/t1/run.json", {"value": "new"})

    assert store.read_document("runs/t1/run.json")["value"] == "new"
    assert not list(store.root.rglob(".tmp-*"))


def test_records_round_trip(store: RunStore) -> None:
    assert store.write_records("datagen/pairs/batch.jsonl", [{"id": 1}, _Doc(name="x")]) == 2  # noqa: PLR2004
    store.append_record("datagen/pairs/batch.jsonl", {"id": 3})
    records = list(store.read_records("datagen/pairs/batch.jsonl"))
    assert records == [{"id": 1}, {"name": "x", "final_image": None}, {"id": 3}]
    lines = (store.root / "datagen" / "pairs" / "batch.jsonl").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 3  # noqa: PLR2004


def test_concurrent_appends_are_not_lost(store: RunStore) -> None:
    with ThreadPoolExecutor(max_workers=8) as executor:
        list(executor.map(lambda idx: store.append_record("log.jsonl", {"idx": idx}), range(40)))
    assert sorted(record["idx"] for record in store.read_records("log.jsonl")) == list(range(40))


def test_healthy_store_verifies(store: RunStore) -> None:
    digest = store.put_blob(b"image")
    store.write_document("runs/t1/run.json", _Doc(name="t1", final_image=digest))
    assert verify_store(store) == []


def test_truncated_blob_is_reported(store: RunStore) -> None:
    digest = store.put_blob(b"complete image bytes")
    store.blob_path(digest).write_bytes(b"complete")
    violations = verify_store(store)
    assert [(v.kind, v.path) for v in violations] == [("digest_mismatch", f"blobs/{digest}")]


def test_dangling_reference_is_reported(store: RunStore) -> None:
    digest = store.put_blob(b"image")
    store.write_document("runs/t1/run.json", _Doc(name="t1", final_image=digest))
    store.blob_path(digest).unlink()
    violations = verify_store(store)
    assert [(v.kind, v.path) for v in violations] == [("dangling_reference", "runs/t1/run.json")]
    assert digest in violations[0].detail


def test_unreadable_document_is_reported(store: RunStore) -> None:
    (store.root / "runs" / "t1").mkdir(parents=True)
    (store.root / "runs" / "t1" / "run.json").write_text('{"name": ', encoding="utf-8")
    violations = verify_store(store)
    assert [v.kind for v in violations] == ["unreadable_document"]


def test_references_inside_records_are_checked(store: RunStore) -> None:
    store.write_records("datagen/pairs/b.jsonl", [{"winner_image": "a" * 64, "note": json.dumps({"x": 1})}])
    assert [v.kind for v in verify_store(store)] == ["dangling_reference"]


@pytest.mark.parametrize("field", ["images", "candidates"])
def test_digest_lists_are_checked(store: RunStore, field: str) -> None:
    present = store.put_blob(b"present")
    store.write_document("runs/t1/round_scores.json", {field: [present, "b" * 64]})
    violations = verify_store(store)
    assert [v.kind for v in violations] == ["dangling_reference"]
    assert "b" * 64 in violations[0].detail
