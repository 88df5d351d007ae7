#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Cell canonicalization used for data-point counting and annotation consensus."""

from __future__ import annotations

import re
from decimal import Decimal, InvalidOperation

from pydantic import BaseModel, ConfigDict

CURRENCY_SYMBOLS = "$€£¥₹"
"""Currency symbols stripped once from the start of a numeric cell."""

_WHITESPACE_RE = re.compile(r"\s+")
_NUMBER_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_GROUPED_RE = re.compile(r"[+-]?\d{1,3}(?:,\d{3})+(?:\.\d+)?")


class Cell(BaseModel):
    """A canonicalized table cell."""

    model_config = ConfigDict(frozen=True)

    raw: str
    """The cell text as found in the table."""
    canonical: str
    """Trimmed text with internal whitespace runs collapsed to one space."""
    numeric_value: Decimal | None = None
    """Parsed value when the canonical text is a finite decimal."""

    @property
    def key(self) -> tuple[str, str]:
        """Comparison key: numbers compare by value, text compares case-folded."""
        if self.numeric_value is not None:
            return "num", _exact_number_key(self.numeric_value)
        return "text", self.canonical.casefold()


def _exact_number_key(value: Decimal) -> str:
    # exact: no context rounding or exponent limit
    if value.is_zero():
        return "0"
    sign, digits, exponent = value.as_tuple()
    significand = "".join(map(str, digits)).rstrip("0")
    shift = int(exponent) + len(digits) - len(significand)
    prefix = "-" if sign else ""
    return f"{prefix}{significand}e{shift}"


def parse_numeric(text: str) -> Decimal | None:
    """Parses a canonical cell text as a finite decimal.

    One leading currency symbol and one trailing percent sign are stripped, as are thousands separators
    in the `1,234,567` grouping. Everything else stays textual.

    Args:
        text: Canonical cell text.

    Returns:
        The value, or `None` when the text is not numeric.

    """
    candidate = text
    if candidate.endswith("%"):
        candidate = candidate[:-1].rstrip()
    sign = ""
    if candidate[:1] in ("+", "-") and candidate[1:2] and candidate[1:2] in CURRENCY_SYMBOLS:
        sign, candidate = candidate[0], candidate[1:]
    if candidate[:1] and candidate[0] in CURRENCY_SYMBOLS:
        candidate = candidate[1:].lstrip()
    candidate = sign + candidate

    if "," in candidate:
        if not _GROUPED_RE.fullmatch(candidate):
            return None
        candidate = candidate.replace(",", "")
    if not _NUMBER_RE.fullmatch(candidate):
        return None
    try:
        value = Decimal(candidate)
    except InvalidOperation:
        return None
    return value if value.is_finite() else None


def canonicalize_cell(raw: str) -> Cell:
    """Canonicalizes a raw cell.

    Args:
        raw: Any string.

    Returns:
        The canonical cell. `" 1,234 "` gives `numeric_value == 1234`, `"1.50"` and `"1.5"` compare equal,
        `"N/A"` has no numeric value.

    """
    canonical = _WHITESPACE_RE.sub(" ", raw).strip()
    return Cell(raw=raw, canonical=canonical, numeric_value=parse_numeric(canonical) if canonical else None)
