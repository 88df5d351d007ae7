#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Rewriting fine-tuning samples: describe the ground-truth image, then reason back from table to description."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import TYPE_CHECKING

from tqdm import tqdm

from tablevis_tools.backends import chat_complete
from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import BackendError, ResponseParseError
from tablevis_tools.datagen.models import SftSample, SkipRecord
from tablevis_tools.pipeline.stages import build_messages
from tablevis_tools.pipeline.templates import load_template
from tablevis_tools.tables import serialize_markdown
from tablevis_tools.utils.logging import get_logger

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from tablevis_tools.backends import ImageBlob
    from tablevis_tools.core.config import BackendConfig
    from tablevis_tools.tables import TableInstance

_logger = get_logger(__name__)


def _describe_then_reason(
    table: TableInstance,
    gt_image: ImageBlob,
    chat_backend: BackendConfig,
    templates_dir: Path | None,
) -> SftSample:
    table_markdown = serialize_markdown(table.grid)
    describe = build_messages(
        load_template("describe", templates_dir), {"TABLE_MARKDOWN": table_markdown}, images=[gt_image]
    )
    description = chat_complete(chat_backend, describe).strip()
    if not description:
        msg = "empty description"
        raise ResponseParseError(msg)

    reason = build_messages(
        load_template("rationale", templates_dir), {"TABLE_MARKDOWN": table_markdown, "DESCRIPTION": description}
    )
    rationale = chat_complete(chat_backend, reason).strip()
    if not rationale:
        msg = "empty rationale"
        raise ResponseParseError(msg)
    return SftSample(table_markdown=table_markdown, rationale=rationale, description=description)


def build_rewrite_sample(
    table: TableInstance,
    gt_image: ImageBlob,
    chat_backend: BackendConfig,
    templates_dir: Path | None = None,
) -> SftSample | None:
    """Builds one `{table, rationale} -> {description}` sample from a table and its ground-truth image.

    Args:
        table: The table.
        gt_image: The ground-truth image of the table.
        chat_backend: Multimodal chat backend used for both calls.
        templates_dir: Optional template directory override.

    Returns:
        The sample, or `None` (with the reason logged) when either call returns nothing.

    """
    try:
        return _describe_then_reason(table, gt_image, chat_backend, templates_dir)
    except ResponseParseError as ex:
        _logger.warning("Skipping rewrite sample %s: %s", table.id, ex)
        return None


def build_rewrite_samples(
    items: Sequence[tuple[TableInstance, ImageBlob]],
    chat_backend: BackendConfig,
    concurrency: int = consts.compute.DEFAULT_CONCURRENCY,
    templates_dir: Path | None = None,
) -> tuple[list[SftSample], list[SkipRecord]]:
    """Builds rewrite samples for a batch, skipping failed items.

    Args:
        items: Tables with their ground-truth images.
        chat_backend: Multimodal chat backend.
        concurrency: Number of items processed concurrently.
        templates_dir: Optional template directory override.

    Returns:
        The samples in input order and one skip record per failed item.

    """
    results: dict[int, SftSample | SkipRecord] = {}

    def work(idx: int) -> SftSample | SkipRecord:
        table, image = items[idx]
        try:
            return _describe_then_reason(table, image, chat_backend, templates_dir)
        except (ResponseParseError, BackendError) as ex:
            _logger.warning("Skipping rewrite sample %s: %s", table.id, ex)
            return SkipRecord(item_id=table.id, reason=f"{type(ex).__name__}: {ex}")

    with ThreadPoolExecutor(max_workers=concurrency, thread_name_prefix="rewrite") as executor:
        futures = {executor.submit(work, idx): idx for idx in range(len(items))}
        for future in tqdm(as_completed(futures), total=len(futures), desc="Building rewrite samples", unit="item"):
            results[futures[future]] = future.result()

    ordered = [results[idx] for idx in range(len(items))]
    samples = [r for r in ordered if isinstance(r, SftSample)]
    skips = [r for r in ordered if isinstance(r, SkipRecord)]
    _logger.info("Built %d rewrite samples, skipped %d", len(samples), len(skips))
    return samples, skips
