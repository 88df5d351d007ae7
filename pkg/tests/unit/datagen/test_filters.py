#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

import numpy as np
import pytest

from tablevis_tools.backends import get_backend, stamp_image
from tablevis_tools.core import consts
from tablevis_tools.core.config import BackendConfig, MockScript
from tablevis_tools.datagen import (
    consensus_filter,
    mutual_approval,
    parse_yes_no,
    resolution_filter,
    statistical_screen,
)
from tablevis_tools.tables import TableGrid

_TABLE = "| Region | Sales |\n|---|---|\n| North | 1,234 |\n| South | 1.50 |"


@pytest.mark.parametrize(
    ("width", "height", "expected"),
    [(200, 200, True), (199, 800, False), (800, 199, False), (1024, 768, True), (0, 0, False)],
)
def test_resolution_filter(width: int, height: int, expected: bool) -> None:  # noqa: FBT001
    assert resolution_filter(width, height) is expected


def test_consensus_on_canonically_equal_annotations() -> None:
    other = "Region | Sales\n:--|--:\n north |1234\nSOUTH| 1.5"
    grid = consensus_filter(_TABLE, other)
    assert grid == TableGrid.of(["Region", "Sales"], [["North", "1,234"], ["South", "1.50"]])



def test_consensus_with_huge_exponents() -> None:
    table = "| Name | Value |\n|---|---|\n| big | 1e99999999999 |"
    assert consensus_filter(table, "| Name | Value |\n|---|---|\n| big | 10e99999999998 |") is not None
    assert consensus_filter(table, "| Name | Value |\n|---|---|\n| big | 1e99999999998 |") is None


@pytest.mark.parametrize(
    "other",
    [
        "| Region | Sales |\n|---|---|\n| North | 1,234 |\n| South | 1.51 |",
        "| Region | Sales |\n|---|---|\n| North | 1,234 |",
        "| Region | Revenue |\n|---|---|\n| North | 1,234 |\n| South | 1.50 |",
        "| Region |\n|---|\n| North |\n| South |",
        "no table here",
        "",
    ],
)
def test_consensus_rejects_disagreement(other: str) -> None:
    assert consensus_filter(_TABLE, other) is None
    assert consensus_filter(other, _TABLE) is None


def test_consensus_is_symmetric_under_random_edits() -> None:
    rng = np.random.default_rng(consts.reproducibility.SEED)
    edits = ["1,234", "1234", "1234.0", "1,235", "north", "NORTH ", "South", "s0uth", "1.50", "1.5"]
    for _ in range(100):
        a, b, c, d = rng.choice(edits, size=4)
        left = f"| Region | Sales |\n|---|---|\n| {a} | {b} |"
        right = f"| Region | Sales |\n|---|---|\n| {c} | {d} |"
        forward, backward = consensus_filter(left, right), consensus_filter(right, left)
        assert (forward is None) == (backward is None)


@pytest.mark.parametrize(
    ("text", "expected"),
    [("YES", True), ("no.", False), ("Let me think... yes, it is. Final: NO", False), ("maybe", None)],
)
def test_parse_yes_no(text: str, expected: bool | None) -> None:  # noqa: FBT001
    assert parse_yes_no(text) is expected


def test_statistical_screen() -> None:
    image = stamp_image(b"source")
    assert statistical_screen(_TABLE, image, BackendConfig.mock(MockScript(name="yes", default="YES")))
    assert not statistical_screen(_TABLE, image, BackendConfig.mock(MockScript(name="no", default="NO")))
    assert not statistical_screen(_TABLE, image, BackendConfig.mock(MockScript(name="vague", default="hmm")))


def test_mutual_approval_needs_both_judges() -> None:
    image = stamp_image(b"source")
    yes = BackendConfig.mock(MockScript(name="a", default="YES"))
    no = BackendConfig.mock(MockScript(name="b", default="NO"))
    assert mutual_approval(_TABLE, _TABLE, image, yes, BackendConfig.mock(MockScript(name="c", default="YES")))
    assert not mutual_approval(_TABLE, _TABLE, image, yes, no)
    assert not mutual_approval(_TABLE, _TABLE, image, no, yes)
    assert get_backend(no).calls["chat"] == 2  # noqa: PLR2004
