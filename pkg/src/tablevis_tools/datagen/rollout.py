#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Rollout filtering of refinement samples.

Each sample is edited k times with different seeds and every candidate is judged BETTER or WORSE than the
initial image. Samples on which all candidates agree carry no learning signal and are discarded.
"""

from __future__ import annotations

import re
from typing import TYPE_CHECKING

from tablevis_tools.backends import ChatMessage, chat_complete, edit_image
from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import BackendError
from tablevis_tools.datagen.models import RefinementSample, RolloutOutcome, RolloutVerdict
from tablevis_tools.pipeline.stages import build_messages
from tablevis_tools.pipeline.templates import load_template
from tablevis_tools.utils.logging import get_logger

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from tablevis_tools.backends import ImageBlob
    from tablevis_tools.core.config import BackendConfig
    from tablevis_tools.runstore import RunStore

_logger = get_logger(__name__)

_FINAL_WORD_RE = re.compile(r"([A-Za-z]+)\W*\Z")

VERDICT_REMINDER = "End your reply with a single final word: BETTER or WORSE."


def parse_rollout_verdict(text: str) -> RolloutVerdict | None:
    """Reads the final word of a comparison reply. Returns `None` unless it is BETTER or WORSE."""
    match = _FINAL_WORD_RE.search(text.strip())
    if match is None:
        return None
    word = match.group(1).upper()
    if word == "BETTER":
        return "BETTER"
    if word == "WORSE":
        return "WORSE"
    return None


def keep_sample(verdicts: Sequence[RolloutVerdict]) -> bool:
    """Keeps a sample unless all candidates were judged better, or all worse."""
    return len(set(verdicts)) > 1


def _judge_candidate(
    sample: RefinementSample,
    initial_image: ImageBlob,
    candidate: ImageBlob,
    judge_backend: BackendConfig,
    templates_dir: Path | None,
) -> RolloutVerdict | None:
    template = load_template("compare_initial", templates_dir)
    messages = build_messages(
        template,
        {"TABLE_MARKDOWN": sample.table_markdown, "INSTRUCTION": sample.instruction},
        images=[initial_image, candidate],
    )
    reply = chat_complete(judge_backend, messages)
    verdict = parse_rollout_verdict(reply)
    if verdict is None:
        _logger.warning("Rollout judge reply has no final BETTER/WORSE, asking once more")
        retry = [
            *messages,
            ChatMessage.build("assistant", reply or "(empty reply)"),
            ChatMessage.build("user", VERDICT_REMINDER),
        ]
        verdict = parse_rollout_verdict(chat_complete(judge_backend, retry))
    return verdict


def rollout_filter(
    sample: RefinementSample,
    initial_image: ImageBlob,
    edit_backend: BackendConfig,
    judge_backend: BackendConfig,
    k: int = consts.pipeline.ROLLOUT_K,
    store: RunStore | None = None,
    templates_dir: Path | None = None,
) -> RolloutOutcome:
    """Decides whether a refinement sample is kept.

    Args:
        sample: The sample.
        initial_image: The image `sample.initial_image` refers to.
        edit_backend: Image editing backend producing the candidates.
        judge_backend: Judge comparing each candidate with the initial image.
        k: Number of candidates, at least 2.
        store: When given, the initial image and the candidates are stored.
        templates_dir: Optional template directory override.

    Returns:
        The outcome. Judge protocol failures and edit failures discard the sample with a reason.

    """
    if k < 2:  # noqa: PLR2004
        msg = f"Rollout needs at least 2 candidates, got {k}"
        raise ValueError(msg)
    if initial_image.sha256 != sample.initial_image:
        msg = "initial_image does not match the digest recorded in the sample"
        raise ValueError(msg)
    if store is not None:
        store.put_blob(initial_image.data)

    verdicts: list[RolloutVerdict] = []
    candidates: list[str] = []
    for idx in range(k):
        try:
            seed = consts.reproducibility.SEED + idx
            candidate = edit_image(edit_backend, initial_image, sample.instruction, seed=seed)
        except BackendError as ex:
            return _discard(sample, verdicts, candidates, f"edit {idx + 1}/{k} failed: {ex}")
        candidates.append(candidate.sha256)
        if store is not None:
            store.put_blob(candidate.data)
        try:
            verdict = _judge_candidate(sample, initial_image, candidate, judge_backend, templates_dir)
        except BackendError as ex:
            return _discard(sample, verdicts, candidates, f"judge call on candidate {idx + 1}/{k} failed: {ex}")
        if verdict is None:
            return _discard(sample, verdicts, candidates, f"judge protocol failure on candidate {idx + 1}/{k}")
        verdicts.append(verdict)

    kept = keep_sample(verdicts)
    reason = None if kept else f"all {k} candidates judged {verdicts[0]}"
    _logger.info("Rollout of %s: %s -> %s", sample.initial_image[:12], "".join(v[0] for v in verdicts), kept)
    return RolloutOutcome(
        sample=sample, kept=kept, verdicts=tuple(verdicts), candidates=tuple(candidates), reason=reason
    )


def _discard(
    sample: RefinementSample,
    verdicts: list[RolloutVerdict],
    candidates: list[str],
    reason: str,
) -> RolloutOutcome:
    _logger.warning("Discarding rollout sample %s: %s", sample.initial_image[:12], reason)
    return RolloutOutcome(
        sample=sample, kept=False, verdicts=tuple(verdicts), candidates=tuple(candidates), reason=reason
    )
