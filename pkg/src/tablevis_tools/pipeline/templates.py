#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Prompt template loading and rendering.

Template files are UTF-8 text with a `[system]` and a `[user]` section. Lines starting with `#` before the
first section are comments. Placeholders use the `{{NAME}}` syntax.
"""

from __future__ import annotations

import functools
import re
from pathlib import Path
from typing import TYPE_CHECKING

from pydantic import BaseModel, ConfigDict

from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import TemplateError
from tablevis_tools.core.settings import current_settings

if TYPE_CHECKING:
    from collections.abc import Mapping

_PLACEHOLDER_RE = re.compile(r"\{\{([A-Z_]+)\}\}")
_SECTION_RE = re.compile(r"^\[(system|user)\]\s*$", re.MULTILINE)

REQUIRED_PLACEHOLDERS: dict[str, frozenset[str]] = {
    "rewrite": frozenset({"TABLE_MARKDOWN", "TOPIC"}),
    "reflect": frozenset({"TABLE_MARKDOWN", "ROUND", "PRIOR_INSTRUCTIONS", "DESCRIPTION"}),
    "audit_da": frozenset({"TABLE_MARKDOWN"}),
    "audit_tr": frozenset({"TABLE_MARKDOWN"}),
    "audit_rr": frozenset({"TABLE_MARKDOWN"}),
    "audit_aa": frozenset({"TABLE_MARKDOWN"}),
    "describe": frozenset({"TABLE_MARKDOWN"}),
    "rationale": frozenset({"TABLE_MARKDOWN", "DESCRIPTION"}),
    "screen": frozenset({"TABLE_MARKDOWN"}),
    "approve": frozenset({"TABLE_MARKDOWN"}),
    "compare_initial": frozenset({"TABLE_MARKDOWN", "INSTRUCTION"}),
    "pairwise_vote": frozenset({"PROMPT"}),
}
"""Placeholders every template of a given name must contain."""


class PromptTemplate(BaseModel):
    """A parsed prompt template."""

    model_config = ConfigDict(frozen=True)

    name: str
    system: str
    user: str

    @property
    def placeholders(self) -> frozenset[str]:
        """All placeholder names used by the template."""
        return frozenset(_PLACEHOLDER_RE.findall(self.system + self.user))

    def render(self, values: Mapping[str, str]) -> tuple[str, str]:
        """Substitutes every placeholder.

        Args:
            values: Placeholder values by name.

        Returns:
            The rendered system and user prompts.

        Raises:
            TemplateError: When a placeholder used by the template has no value.

        """
        missing = sorted(self.placeholders - set(values))
        if missing:
            msg = f"Template {self.name!r} has no value for {', '.join(missing)}"
            raise TemplateError(msg)

        def substitute(text: str) -> str:
            return _PLACEHOLDER_RE.sub(lambda m: values[m.group(1)], text)

        return substitute(self.system), substitute(self.user)


def parse_template(name: str, text: str) -> PromptTemplate:
    """Parses template text and checks the required placeholders.

    Args:
        name: Template name, used to look up the required placeholders.
        text: Template file content.

    Returns:
        The template.

    Raises:
        TemplateError: When a section or a required placeholder is missing.

    """
    sections: dict[str, str] = {}
    matches = list(_SECTION_RE.finditer(text))
    for idx, match in enumerate(matches):
        end = matches[idx + 1].start() if idx + 1 < len(matches) else len(text)
        sections[match.group(1)] = text[match.end() : end].strip("\n")
    if "user" not in sections:
        msg = f"Template {name!r} has no [user] section"
        raise TemplateError(msg)

    template = PromptTemplate(name=name, system=sections.get("system", ""), user=sections["user"])
    missing = sorted(REQUIRED_PLACEHOLDERS.get(name, frozenset()) - template.placeholders)
    if missing:
        msg = f"Template {name!r} is missing required placeholders: {', '.join(missing)}"
        raise TemplateError(msg)
    return template


def resolve_templates_dir(templates_dir: Path | None = None) -> Path:
    """Picks the explicit directory, then the `TABLEVIS_TEMPLATES_DIR` setting, then the bundled templates."""
    return templates_dir or current_settings().templates_dir or consts.directories.TEMPLATES_DIR


@functools.cache
def _load(name: str, templates_dir: Path) -> PromptTemplate:
    path = templates_dir / f"{name}.txt"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as ex:
        msg = f"Cannot read template {path.as_posix()}: {ex}"
        raise TemplateError(msg) from ex
    return parse_template(name, text)


def load_template(name: str, templates_dir: Path | None = None) -> PromptTemplate:
    """Loads a named template (`<templates_dir>/<name>.txt`).

    Args:
        name: Template name, for example `rewrite` or `audit_da`.
        templates_dir: Optional directory overriding the bundled templates.

    Returns:
        The template.

    """
    return _load(name, Path(resolve_templates_dir(templates_dir)).resolve())
