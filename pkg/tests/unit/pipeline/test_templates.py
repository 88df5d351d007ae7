#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

from typing import TYPE_CHECKING

import pytest

from tablevis_tools.core.exceptions import TemplateError
from tablevis_tools.pipeline import load_template
from tablevis_tools.pipeline.templates import REQUIRED_PLACEHOLDERS, parse_template

if TYPE_CHECKING:
    from pathlib import Path


@pytest.mark.parametrize("name", sorted(REQUIRED_PLACEHOLDERS))
def test_bundled_templates_load(name: str) -> None:
    template = load_template(name)
    assert template.user
    assert REQUIRED_PLACEHOLDERS[name] <= template.placeholders


def test_render_substitutes_every_placeholder() -> None:
    template = parse_template("custom", "# comment\n[system]\nYou audit {{WHAT}}.\n[user]\nTable:\n{{TABLE}}")
    assert template.render({"WHAT": "charts", "TABLE": "| A |"}) == ("You audit charts.", "Table:\n| A |")


def test_render_with_missing_value() -> None:
    template = parse_template("custom", "[user]\n{{A}} {{B}}")
    with pytest.raises(TemplateError, match="B"):
        template.render({"A": "x"})


def test_template_without_user_section() -> None:
    with pytest.raises(TemplateError, match=r"\[user\]"):
        parse_template("custom", "[system]\nonly a system prompt")


def test_override_directory_is_validated(tmp_path: Path) -> None:
    (tmp_path / "rewrite.txt").write_text("[user]\nDraw {{TABLE_MARKDOWN}}", encoding="utf-8")
    with pytest.raises(TemplateError, match="TOPIC"):
        load_template("rewrite", tmp_path)


def test_override_directory_is_used(tmp_path: Path) -> None:
    (tmp_path / "screen.txt").write_text("[user]\nTask: screen\n{{TABLE_MARKDOWN}}", encoding="utf-8")
    assert load_template("screen", tmp_path).system == ""


def test_missing_template_file(tmp_path: Path) -> None:
    with pytest.raises(TemplateError, match="Cannot read"):
        load_template("reflect", tmp_path)
