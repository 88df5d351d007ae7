#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

import pytest

from tablevis_tools.backends import get_backend, stamp_image
from tablevis_tools.core.config import BackendConfig, MockScript
from tablevis_tools.core.exceptions import JudgeProtocolError
from tablevis_tools.judge import DaReport, extract_json_object, run_audit
from tablevis_tools.tables import TableInstance

_TABLE = TableInstance.from_markdown("t1", "| Region | Sales |\n|---|---|\n| North | 10 |\n| South | 12 |")


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ('{"a": 1}', {"a": 1}),
        ('Reasoning first.\n```json\n{"a": 1}\n```', {"a": 1}),
        ('```json\n{"a": 1}\n```\nthen a fix:\n```json\n{"a": 2}\n```', {"a": 2}),
        ('```\n{"a": 3}\n```', {"a": 3}),
        ('The answer is {"a": 4} as requested.', {"a": 4}),
    ],
)
def test_extract_json_object(text: str, expected: dict[str, int]) -> None:
    assert extract_json_object(text) == expected


@pytest.mark.parametrize("text", ["", "no json at all", "[1, 2, 3]", "```json\n[1]\n```", "{not json}"])
def test_extract_json_object_none(text: str) -> None:
    assert extract_json_object(text) is None


def test_audit_parses_the_first_reply() -> None:
    cfg = BackendConfig.mock(MockScript(responses=('```json\n{"total_points": 4, "errors": ["x"]}\n```',)))
    outcome = run_audit("DA", _TABLE, stamp_image(b"img"), cfg)
    assert outcome.report == DaReport(n_total=4, n_error=1)
    assert len(outcome.replies) == 1
    request_text = "\n".join(message.text for message in get_backend(cfg).requests[0])  # type: ignore[attr-defined]
    assert "| North | 10 |" in request_text


def test_audit_reasks_once() -> None:
    cfg = BackendConfig.mock(MockScript(responses=("I think it looks fine.", '{"total_points": 4, "errors": []}')))
    outcome = run_audit("DA", _TABLE, stamp_image(b"img"), cfg)
    assert outcome.report == DaReport(n_total=4, n_error=0)
    assert outcome.replies == ("I think it looks fine.", '{"total_points": 4, "errors": []}')
    reask = get_backend(cfg).requests[1]  # type: ignore[attr-defined]
    assert [message.role for message in reask[-2:]] == ["assistant", "user"]
    assert "total_points" in reask[-1].text


def test_schema_mismatch_counts_as_unparseable() -> None:
    cfg = BackendConfig.mock(MockScript(responses=('{"total": 4}', '{"total_chars": 10, "error_chars": 1}')))
    outcome = run_audit("TR", _TABLE, stamp_image(b"img"), cfg)
    assert len(outcome.replies) == 2  # noqa: PLR2004


def test_audit_gives_up_after_one_reask() -> None:
    cfg = BackendConfig.mock(MockScript(default="still no json"))
    with pytest.raises(JudgeProtocolError, match="after one re-ask"):
        run_audit("RR", _TABLE, stamp_image(b"img"), cfg)
    assert get_backend(cfg).calls["chat"] == 2  # noqa: PLR2004
