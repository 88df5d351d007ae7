#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Content-addressed blob storage and atomically replaced JSON documents under one root directory.

Layout:

```
<root>/blobs/<sha256>
<root>/runs/<instance_id>/run.json
<root>/runs/<instance_id>/scores.json
<root>/runs/<instance_id>/audits/<dim>.json
<root>/runs/<instance_id>/round_scores.json
<root>/runs/<instance_id>/reference/scores.json
<root>/runs/<instance_id>/reference/audits/<dim>.json
<root>/datagen/<pipeline>/<batch>.jsonl
```

Every write goes to a `.tmp-*` file in the target directory first and is then renamed over the target, so
readers see either the old or the new complete file.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
import threading
import time
from pathlib import Path
from typing import TYPE_CHECKING, Any, Literal, TypeVar, overload

from pydantic import BaseModel

from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import StoreError
from tablevis_tools.utils.logging import get_logger
from tablevis_tools.utils.serialization import dumps_document, dumps_record

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping

_logger = get_logger(__name__)

M = TypeVar("M", bound=BaseModel)

TMP_PREFIX = ".tmp-"
STALE_TEMP_SECONDS = 3600
"""Temp files younger than this may belong to a writer in another process and are left alone."""
BLOBS_DIR = "blobs"

_SEGMENT_RE = re.compile(r"[A-Za-z0-9._-]+")
_DIGEST_RE = re.compile(r"[0-9a-f]{64}")
_REFERENCE_SUFFIXES = ("image", "images", "sha256", "digest", "candidates")

ViolationKind = Literal["digest_mismatch", "dangling_reference", "unreadable_document"]


class StoreViolation(BaseModel):
    """One integrity problem found by `verify_store`."""

    kind: ViolationKind
    path: str
    """Store relative path of the offending blob or document."""
    detail: str


def is_safe_segment(segment: str) -> bool:
    """Checks whether a string may be used as one path segment of a document key."""
    return bool(_SEGMENT_RE.fullmatch(segment)) and segment not in {".", ".."} and not segment.startswith(TMP_PREFIX)


class RunStore:
    """Durable store for image blobs and run documents, safe for concurrent writers.

    Opening a store creates the root directory and removes temp files left behind by interrupted writes, once
    they are older than `STALE_TEMP_SECONDS`.

    Args:
        root: Store root directory.

    """

    def __init__(self, root: Path) -> None:
        self.root = root
        self._append_lock = threading.Lock()
        try:
            (root / BLOBS_DIR).mkdir(parents=True, exist_ok=True)
        except OSError as ex:
            msg = f"Cannot create run store at {root.as_posix()}: {ex}"
            raise StoreError(msg) from ex
        self._clean_temp_files()

    def _clean_temp_files(self) -> None:
        cutoff = time.time() - STALE_TEMP_SECONDS
        for path in self.root.rglob(f"{TMP_PREFIX}*"):
            try:
                stale = path.is_file() and path.stat().st_mtime < cutoff
            except OSError:
                continue
            if stale:
                _logger.warning("Removing leftover temp file %s", path.as_posix())
                path.unlink(missing_ok=True)

    def _atomic_write(self, target: Path, data: bytes) -> None:
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=TMP_PREFIX)
            tmp_path = Path(tmp_name)
            try:
                with os.fdopen(fd, "wb") as fp:
                    fp.write(data)
                    fp.flush()
                    os.fsync(fp.fileno())
                tmp_path.replace(target)
            except BaseException:
                tmp_path.unlink(missing_ok=True)
                raise
        except OSError as ex:
            msg = f"Failed to write {target.as_posix()}: {ex}"
            raise StoreError(msg) from ex

    # blobs

    def blob_path(self, digest: str) -> Path:
        """Path of the blob with the given digest (which may not exist)."""
        if not _DIGEST_RE.fullmatch(digest):
            msg = f"Not a SHA-256 hex digest: {digest!r}"
            raise StoreError(msg)
        return self.root / BLOBS_DIR / digest

    def has_blob(self, digest: str) -> bool:
        """Checks whether a blob exists."""
        return self.blob_path(digest).is_file()

    def put_blob(self, data: bytes) -> str:
        """Stores bytes under their SHA-256 digest. Storing existing bytes again is a no-op.

        Args:
            data: The blob bytes.

        Returns:
            The hex digest.

        """
        digest = hashlib.sha256(data).hexdigest()
        target = self.blob_path(digest)
        if not target.is_file():
            self._atomic_write(target, data)
        return digest

    def get_blob(self, digest: str) -> bytes:
        """Reads a blob.

        Args:
            digest: The hex digest.

        Returns:
            The blob bytes.

        Raises:
            StoreError: When the blob is missing or unreadable.

        """
        try:
            return self.blob_path(digest).read_bytes()
        except OSError as ex:
            msg = f"Cannot read blob {digest}: {ex}"
            raise StoreError(msg) from ex

    # documents

    def path_for(self, key: str) -> Path:
        """Resolves a document key such as `runs/<id>/run.json` to its path, validating every segment."""
        segments = key.split("/")
        if not segments or not all(is_safe_segment(segment) for segment in segments) or segments[0] == BLOBS_DIR:
            msg = f"Invalid document key: {key!r}"
            raise StoreError(msg)
        return self.root.joinpath(*segments)

    def has_document(self, key: str) -> bool:
        """Checks whether a document exists."""
        return self.path_for(key).is_file()

    def write_document(self, key: str, document: BaseModel | Mapping[str, Any]) -> None:
        """Atomically writes a JSON document, stamped with the schema version. Last writer wins.

        Args:
            key: Document key, for example `runs/<id>/run.json`.
            document: A pydantic model or a JSON compatible mapping.

        """
        payload = document.model_dump(mode="json") if isinstance(document, BaseModel) else dict(document)
        payload["schema_version"] = consts.pipeline.SCHEMA_VERSION
        self._atomic_write(self.path_for(key), dumps_document(payload).encode("utf-8"))

    @overload
    def read_document(self, key: str) -> dict[str, Any]: ...

    @overload
    def read_document(self, key: str, model: type[M]) -> M: ...

    def read_document(self, key: str, model: type[M] | None = None) -> dict[str, Any] | M:
        """Reads a JSON document, optionally validating it into a model.

        Args:
            key: Document key.
            model: Optional pydantic model class.

        Returns:
            The raw dict, or the validated model.

        Raises:
            StoreError: When the document is missing or not valid JSON.

        """
        path = self.path_for(key)
        try:
            text = path.read_text(encoding="utf-8")
            payload = json.loads(text)
        except (OSError, ValueError) as ex:
            msg = f"Cannot read document {key}: {ex}"
            raise StoreError(msg) from ex
        if model is None:
            return payload  # type: ignore[no-any-return]
        return model.model_validate(payload)

    def write_records(self, key: str, records: Iterable[BaseModel | Mapping[str, Any]]) -> int:
        """Atomically writes a JSON lines file, replacing any previous content.

        Args:
            key: Document key ending in `.jsonl`.
            records: The records.

        Returns:
            The number of records written.

        """
        lines = [
            dumps_record(r.model_dump(mode="json") if isinstance(r, BaseModel) else dict(r)) + "\n" for r in records
        ]
        self._atomic_write(self.path_for(key), "".join(lines).encode("utf-8"))
        return len(lines)

    def append_record(self, key: str, record: BaseModel | Mapping[str, Any]) -> None:
        """Appends one record to a JSON lines file by rewriting it atomically."""
        with self._append_lock:
            existing = list(self.read_records(key)) if self.has_document(key) else []
            self.write_records(key, [*existing, record])

    def read_records(self, key: str) -> Iterator[dict[str, Any]]:
        """Yields the records of a JSON lines file, skipping blank lines."""
        path = self.path_for(key)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as ex:
            msg = f"Cannot read records {key}: {ex}"
            raise StoreError(msg) from ex
        for line in lines:
            if line.strip():
                yield json.loads(line)

    def iter_documents(self) -> Iterator[Path]:
        """Yields every JSON and JSON lines document path outside the blob directory."""
        blobs_dir = self.root / BLOBS_DIR
        for path in sorted(self.root.rglob("*")):
            if (
                path.is_file()
                and path.suffix in {".json", ".jsonl"}
                and not path.name.startswith(TMP_PREFIX)
                and blobs_dir not in path.parents
            ):
                yield path


def _references(node: Any, key: str = "") -> Iterator[str]:
    if isinstance(node, dict):
        for child_key, child in node.items():
            yield from _references(child, str(child_key))
    elif isinstance(node, list):
        for child in node:
            yield from _references(child, key)
    elif isinstance(node, str) and key.endswith(_REFERENCE_SUFFIXES) and _DIGEST_RE.fullmatch(node):
        yield node


def _load_payloads(path: Path) -> list[Any]:
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".jsonl":
        return [json.loads(line) for line in text.splitlines() if line.strip()]
    return [json.loads(text)]


def verify_store(store: RunStore) -> list[StoreViolation]:
    """Re-hashes every blob and checks that every digest referenced by a document exists.

    A document field counts as a blob reference when its name ends in `image`, `images`, `sha256`, `digest` or
    `candidates` and its value, or a list item of it, is a 64 character hex string.

    Args:
        store: The store.

    Returns:
        The violations, empty for a healthy store.

    """
    violations: list[StoreViolation] = []
    for blob in sorted((store.root / BLOBS_DIR).iterdir()):
        if not blob.is_file() or blob.name.startswith(TMP_PREFIX):
            continue
        actual = hashlib.sha256(blob.read_bytes()).hexdigest()
        if actual != blob.name:
            violations.append(
                StoreViolation(
                    kind="digest_mismatch",
                    path=blob.relative_to(store.root).as_posix(),
                    detail=f"content hashes to {actual}",
                )
            )

    for document in store.iter_documents():
        rel = document.relative_to(store.root).as_posix()
        try:
            payloads = _load_payloads(document)
        except (OSError, ValueError) as ex:
            violations.append(StoreViolation(kind="unreadable_document", path=rel, detail=str(ex)))
            continue
        for digest in sorted({d for payload in payloads for d in _references(payload)}):
            if not store.has_blob(digest):
                violations.append(
                    StoreViolation(kind="dangling_reference", path=rel, detail=f"missing blob {digest}")
                )

    for violation in violations:
        _logger.warning("Store violation %s at %s: %s", violation.kind, violation.path, violation.detail)
    return violations
