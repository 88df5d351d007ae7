#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Auditor protocol: one fenced JSON object per dimension, with a single re-ask on unparseable replies."""

from __future__ import annotations

import json
import re
from typing import TYPE_CHECKING, Any

from pydantic import BaseModel, ConfigDict, ValidationError

from tablevis_tools.backends import ChatMessage, chat_complete
from tablevis_tools.core.exceptions import JudgeProtocolError
from tablevis_tools.judge.reports import (
    REPLY_MODELS,
    REPLY_SCHEMAS,
    AaReport,
    AuditReply,
    DaReport,
    Dimension,
    DimensionReport,
    RrReport,
    TrReport,
    clamp_reply,
)
from tablevis_tools.pipeline.stages import build_messages
from tablevis_tools.pipeline.templates import load_template
from tablevis_tools.tables import serialize_markdown
from tablevis_tools.utils.logging import get_logger

if TYPE_CHECKING:
    from pathlib import Path

    from tablevis_tools.backends import ImageBlob
    from tablevis_tools.core.config import BackendConfig
    from tablevis_tools.tables import TableInstance

_logger = get_logger(__name__)

_FENCE_RE = re.compile(r"```[ \t]*(?:json|JSON)?[ \t]*\n?(.*?)```", re.DOTALL)

REASK_PROMPT = (
    "Your previous answer could not be parsed. Reply again with exactly one fenced JSON object and nothing "
    "else, using this schema:\n```json\n{schema}\n```"
)


def _loads_object(text: str) -> dict[str, Any] | None:
    try:
        obj = json.loads(text)
    except ValueError:
        return None
    return obj if isinstance(obj, dict) else None


def extract_json_object(text: str) -> dict[str, Any] | None:
    """Finds the JSON object in an auditor reply.

    Fenced blocks are tried last to first, then the whole reply, then the span from the first `{` to the last
    `}`.

    Args:
        text: The reply.

    Returns:
        The object, or `None` when the reply holds none.

    """
    for block in reversed(_FENCE_RE.findall(text)):
        obj = _loads_object(block.strip())
        if obj is not None:
            return obj

    stripped = text.strip()
    if not stripped:
        return None
    obj = _loads_object(stripped)
    if obj is not None:
        return obj

    start, end = stripped.find("{"), stripped.rfind("}")
    if start != -1 and end > start:
        return _loads_object(stripped[start : end + 1])
    return None


def parse_audit_reply(dim: Dimension, text: str) -> AuditReply | None:
    """Extracts and validates the reply object of a dimension, or returns `None`."""
    obj = extract_json_object(text)
    if obj is None:
        return None
    try:
        return REPLY_MODELS[dim].model_validate(obj)
    except ValidationError as ex:
        _logger.warning("%s reply does not match its schema: %s", dim, ex.errors(include_url=False))
        return None


class AuditOutcome(BaseModel):
    """A dimension report with the raw auditor replies it was parsed from."""

    model_config = ConfigDict(frozen=True)

    dimension: Dimension
    report: DimensionReport
    replies: tuple[str, ...]


def run_audit(
    dim: Dimension,
    table: TableInstance,
    image: ImageBlob,
    judge_backend: BackendConfig,
    templates_dir: Path | None = None,
) -> AuditOutcome:
    """Audits one dimension of an image, re-asking once when the reply cannot be parsed.

    Args:
        dim: The dimension.
        table: The source table.
        image: The image under audit.
        judge_backend: The auditor backend.
        templates_dir: Optional template directory override.

    Returns:
        The outcome with the clamped report and raw replies.

    Raises:
        JudgeProtocolError: When neither the reply nor the re-ask reply holds a valid object.

    """
    template = load_template(f"audit_{dim.lower()}", templates_dir)
    messages = build_messages(template, {"TABLE_MARKDOWN": serialize_markdown(table.grid)}, images=[image])
    replies = [chat_complete(judge_backend, messages)]
    parsed = parse_audit_reply(dim, replies[0])

    if parsed is None:
        _logger.warning("Unparseable %s audit reply for %s, re-asking once", dim, table.id)
        reask = [
            *messages,
            ChatMessage.build("assistant", replies[0] or "(empty reply)"),
            ChatMessage.build("user", REASK_PROMPT.format(schema=REPLY_SCHEMAS[dim])),
        ]
        replies.append(chat_complete(judge_backend, reask))
        parsed = parse_audit_reply(dim, replies[1])
        if parsed is None:
            msg = f"No parseable {dim} audit reply for {table.id} after one re-ask"
            raise JudgeProtocolError(msg)

    return AuditOutcome(dimension=dim, report=clamp_reply(parsed), replies=tuple(replies))


def audit_dimension(
    dim: Dimension,
    table: TableInstance,
    image: ImageBlob,
    judge_backend: BackendConfig,
    templates_dir: Path | None = None,
) -> DaReport | TrReport | RrReport | AaReport:
    """Audits one dimension of an image and returns its clamped report."""
    return run_audit(dim, table, image, judge_backend, templates_dir).report
