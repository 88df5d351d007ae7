#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Preference pairs voted on by two judges."""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import TYPE_CHECKING

from tqdm import tqdm

from tablevis_tools.backends import ChatMessage, chat_complete
from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import BackendError, JudgeProtocolError
from tablevis_tools.datagen.models import JudgeVote, PairCandidate, Preferred, PreferencePair, SkipRecord
from tablevis_tools.pipeline.stages import build_messages
from tablevis_tools.pipeline.templates import load_template
from tablevis_tools.utils.logging import get_logger

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from tablevis_tools.core.config import BackendConfig
    from tablevis_tools.runstore import RunStore

_logger = get_logger(__name__)

_VOTE_RE = re.compile(r"\b(FIRST|SECOND|TIE)\b", re.IGNORECASE)

VOTE_REMINDER = "Answer with a single word: FIRST, SECOND or TIE."


def parse_vote(text: str) -> Preferred | None:
    """Reads the last FIRST, SECOND or TIE in a reply."""
    matches = _VOTE_RE.findall(text)
    if not matches:
        return None
    word = matches[-1].upper()
    if word == "FIRST":
        return "first"
    if word == "SECOND":
        return "second"
    return "tie"


def judge_id(cfg: BackendConfig) -> str:
    """Provenance id of a judge: its model name, else the mock script name, else the backend kind."""
    if cfg.model_name:
        return cfg.model_name
    if cfg.script is not None:
        return cfg.script.name
    return cfg.kind


def _vote(candidate: PairCandidate, judge: BackendConfig, templates_dir: Path | None) -> JudgeVote:
    messages = build_messages(
        load_template("pairwise_vote", templates_dir),
        {"PROMPT": candidate.prompt},
        images=[candidate.image_a, candidate.image_b],
    )
    reply = chat_complete(judge, messages)
    preferred = parse_vote(reply)
    if preferred is None:
        _logger.warning("Vote of %s has no FIRST/SECOND/TIE, asking once more", judge_id(judge))
        retry = [
            *messages,
            ChatMessage.build("assistant", reply or "(empty reply)"),
            ChatMessage.build("user", VOTE_REMINDER),
        ]
        preferred = parse_vote(chat_complete(judge, retry))
    if preferred is None:
        msg = f"Judge {judge_id(judge)} gave no usable vote"
        raise JudgeProtocolError(msg)
    return JudgeVote(judge_id=judge_id(judge), preferred=preferred)


def vote_pair(
    candidate: PairCandidate,
    judges: tuple[BackendConfig, BackendConfig],
    item_id: str,
    templates_dir: Path | None = None,
) -> PreferencePair | SkipRecord:
    """Asks both judges for their preference and keeps the pair only if they agree on a winner.

    Args:
        candidate: The image pair.
        judges: The two judges.
        item_id: Id used in the skip record.
        templates_dir: Optional template directory override.

    Returns:
        The preference pair, or a skip record naming why the pair was dropped.

    """
    if candidate.image_a.sha256 == candidate.image_b.sha256:
        return SkipRecord(item_id=item_id, reason="both images are identical")
    try:
        votes = tuple(_vote(candidate, judge, templates_dir) for judge in judges)
    except (BackendError, JudgeProtocolError) as ex:
        return SkipRecord(item_id=item_id, reason=f"{type(ex).__name__}: {ex}")

    first, second = votes
    if first.preferred != second.preferred:
        return SkipRecord(item_id=item_id, reason=f"judges disagree ({first.preferred} vs {second.preferred})")
    if first.preferred == "tie":
        return SkipRecord(item_id=item_id, reason="judges voted tie")

    winner, loser = candidate.image_a, candidate.image_b
    if first.preferred == "second":
        winner, loser = loser, winner
    return PreferencePair(
        prompt=candidate.prompt, winner=winner.sha256, loser=loser.sha256, source=candidate.source, votes=votes
    )


def build_preference_pairs(
    candidates: Sequence[PairCandidate],
    judges: tuple[BackendConfig, BackendConfig],
    store: RunStore | None = None,
    templates_dir: Path | None = None,
    concurrency: int = consts.compute.DEFAULT_CONCURRENCY,
) -> tuple[list[PreferencePair], list[SkipRecord]]:
    """Votes on every candidate pair with both judges.

    Args:
        candidates: Image pairs with their prompt and source tag.
        judges: Two distinct judge backends.
        store: When given, the images of every kept pair are stored.
        templates_dir: Optional template directory override.
        concurrency: Number of pairs voted on concurrently.

    Returns:
        The kept pairs in input order and one skip record per dropped pair.

    Raises:
        ValueError: If both judges share one config.

    """
    if judges[0] == judges[1]:
        msg = "Preference voting needs two distinct judge backends"
        raise ValueError(msg)

    results: dict[int, PreferencePair | SkipRecord] = {}
    with ThreadPoolExecutor(max_workers=concurrency, thread_name_prefix="vote") as executor:
        futures = {
            executor.submit(vote_pair, candidate, judges, f"pair-{idx}", templates_dir): idx
            for idx, candidate in enumerate(candidates)
        }
        for future in tqdm(as_completed(futures), total=len(futures), desc="Voting on pairs", unit="pair"):
            results[futures[future]] = future.result()

    pairs: list[PreferencePair] = []
    skips: list[SkipRecord] = []
    for idx, candidate in enumerate(candidates):
        result = results[idx]
        if isinstance(result, SkipRecord):
            _logger.info("Dropped %s: %s", result.item_id, result.reason)
            skips.append(result)
            continue
        if store is not None:
            store.put_blob(candidate.image_a.data)
            store.put_blob(candidate.image_b.data)
        pairs.append(result)
    _logger.info("Kept %d preference pairs, dropped %d", len(pairs), len(skips))
    return pairs, skips
