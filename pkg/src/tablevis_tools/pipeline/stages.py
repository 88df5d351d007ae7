#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""The four pipeline stages: rewrite, generate, reflect and refine."""

from __future__ import annotations

import re
from typing import TYPE_CHECKING

from tablevis_tools.backends import ChatMessage, ImageBlob, chat_complete, edit_image, generate_image
from tablevis_tools.core.exceptions import ResponseParseError
from tablevis_tools.pipeline.models import ReflectionVerdict, RewriteOutput
from tablevis_tools.pipeline.templates import PromptTemplate, load_template
from tablevis_tools.tables import serialize_markdown
from tablevis_tools.utils.logging import get_logger

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from tablevis_tools.core.config import PipelineConfig
    from tablevis_tools.tables import TableInstance

_logger = get_logger(__name__)

_VERDICT_RE = re.compile(r"VERDICT\s*:\s*(SATISFACTORY|NEEDS[_ ]REFINEMENT)", re.IGNORECASE)
_LIST_ITEM_RE = re.compile(r"^\s*(?:\d+[.)]|[-*•])\s+(.*\S)\s*$")

GENERIC_INSTRUCTION = "Correct every element of the image that does not match the table."


def build_messages(
    template: PromptTemplate,
    values: Mapping[str, str],
    images: Sequence[ImageBlob] = (),
) -> list[ChatMessage]:
    """Renders a template into a system message and a user message carrying the images.

    Args:
        template: The prompt template.
        values: Placeholder values.
        images: Images appended to the user message, in order.

    Returns:
        The chat messages. The system message is omitted when the template has none.

    """
    system, user = template.render(values)
    messages = [ChatMessage.build("system", system)] if system.strip() else []
    messages.append(ChatMessage.build("user", user, *images))
    return messages


def parse_rewrite(
    text: str,
    delimiters: tuple[str, str] = ("<think>", "</think>"),
    *,
    require_rationale: bool = False,
) -> RewriteOutput:
    """Splits a rewrite reply into rationale and description.

    The rationale is the text between the delimiters, the description is what follows the closing delimiter.
    Replies without delimiters are taken whole as the description.

    Args:
        text: The model reply.
        delimiters: Opening and closing rationale delimiters.
        require_rationale: Rejects replies without a rationale.

    Returns:
        The rewrite output.

    Raises:
        ResponseParseError: When there is no description, or no rationale while one is required.

    Examples:
        >>> parse_rewrite("<think>plan</think>\\nA bar chart").description
        'A bar chart'

    """
    opening, closing = delimiters
    body = text.strip()
    if not body:
        msg = "Empty rewrite response"
        raise ResponseParseError(msg)

    rationale = ""
    description = body
    close_at = body.rfind(closing)
    if close_at >= 0:
        open_at = body.find(opening)
        head = body[open_at + len(opening) : close_at] if 0 <= open_at < close_at else body[:close_at]
        rationale = head.strip()
        description = body[close_at + len(closing) :].strip()
        if not description and open_at > 0:
            description = body[:open_at].strip()

    if require_rationale and not rationale:
        msg = "Rewrite response has no delimited rationale"
        raise ResponseParseError(msg)
    if not description:
        msg = "Rewrite response has no description section"
        raise ResponseParseError(msg)
    return RewriteOutput(rationale=rationale, description=description)


def parse_reflection(text: str) -> ReflectionVerdict:
    """Parses a reflection reply.

    The last `VERDICT:` line wins. For `NEEDS_REFINEMENT` the numbered (or bulleted) lines above it are the
    instructions. A reply without a verdict line is a protocol deviation and is read as one instruction.

    Args:
        text: The model reply.

    Returns:
        The verdict.

    Raises:
        ResponseParseError: When the reply is empty.

    """
    body = text.strip()
    if not body:
        msg = "Empty reflection response"
        raise ResponseParseError(msg)

    matches = list(_VERDICT_RE.finditer(body))
    if not matches:
        _logger.warning("Reflection protocol deviation: no verdict line, using the whole reply as one instruction")
        return ReflectionVerdict(status="NeedsRefinement", instructions=(body,), raw_text=text)

    last = matches[-1]
    if last.group(1).upper() == "SATISFACTORY":
        return ReflectionVerdict(status="Satisfactory", raw_text=text)

    above = body[: last.start()]
    instructions = [m.group(1) for line in above.splitlines() if (m := _LIST_ITEM_RE.match(line))]
    if not instructions:
        _logger.warning("Reflection protocol deviation: NEEDS_REFINEMENT without a numbered instruction list")
        instructions = [above.strip() or GENERIC_INSTRUCTION]
    return ReflectionVerdict(status="NeedsRefinement", instructions=tuple(instructions), raw_text=text)


def rewrite(table: TableInstance, cfg: PipelineConfig) -> RewriteOutput:
    """Turns a table into a rationale and a detailed generation prompt.

    Args:
        table: The table.
        cfg: The pipeline config.

    Returns:
        The rewrite output.

    """
    template = load_template("rewrite", cfg.templates_dir)
    messages = build_messages(
        template,
        {"TABLE_MARKDOWN": serialize_markdown(table.grid), "TOPIC": table.topic or "unspecified"},
    )
    reply = chat_complete(cfg.rewrite, messages)
    return parse_rewrite(reply, cfg.rationale_delimiters, require_rationale=cfg.require_rationale)


def generate_initial(prompt: str, cfg: PipelineConfig) -> ImageBlob:
    """Generates the initial image from the generation prompt."""
    return generate_image(cfg.generate, prompt)


def reflect(
    table: TableInstance,
    image: ImageBlob,
    cfg: PipelineConfig,
    *,
    round_index: int = 1,
    prior_instructions: Sequence[str] = (),
    description: str | None = None,
) -> ReflectionVerdict:
    """Audits an image against the table and returns a verdict with editing instructions.

    Args:
        table: The table.
        image: The current image.
        cfg: The pipeline config.
        round_index: 1-based round number.
        prior_instructions: Instructions of earlier rounds, shown when `cfg.include_prior_instructions` is set.
        description: Generation prompt, shown when `cfg.include_description` is set.

    Returns:
        The verdict.

    """
    prior = "none"
    if cfg.include_prior_instructions and prior_instructions:
        prior = "; ".join(prior_instructions)
    shown_description = description if cfg.include_description and description else "not provided"

    template = load_template("reflect", cfg.templates_dir)
    messages = build_messages(
        template,
        {
            "TABLE_MARKDOWN": serialize_markdown(table.grid),
            "ROUND": str(round_index),
            "PRIOR_INSTRUCTIONS": prior,
            "DESCRIPTION": shown_description,
        },
        images=[image],
    )
    return parse_reflection(chat_complete(cfg.reflect, messages))


def refine(image: ImageBlob, instruction_block: str, cfg: PipelineConfig) -> ImageBlob:
    """Applies one round's joined instruction block to the current image."""
    return edit_image(cfg.refine, image, instruction_block)
