#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Auditor reply schemas, clamped dimension reports and dimension scores."""

from __future__ import annotations

import math
from typing import Annotated, Literal, Self

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveInt, model_validator

from tablevis_tools.utils.logging import get_logger

_logger = get_logger(__name__)

Dimension = Literal["DA", "TR", "RR", "AA"]
DIMENSIONS: tuple[Dimension, ...] = ("DA", "TR", "RR", "AA")

UnitInterval = Annotated[float, Field(ge=0.0, le=1.0)]
Percentage = Annotated[float, Field(ge=0.0, le=100.0)]


# auditor replies, validated as sent (before clamping)


class AuditReply(BaseModel):
    """Base class of the raw auditor replies. Unknown keys are ignored."""

    model_config = ConfigDict(extra="ignore")


class DaReply(AuditReply):
    """Data accuracy reply."""

    total_points: int
    errors: list[str] = Field(default_factory=list)


class TrReply(AuditReply):
    """Text rendering reply."""

    total_chars: int
    error_chars: int


class RrReply(AuditReply):
    """Relative relationship reply."""

    total_points: int
    violations: list[str] = Field(default_factory=list)


class AaReply(AuditReply):
    """Additional information reply. `null` marks a sub-metric that does not apply."""

    label_error_pct: float | None = None
    total_points: int | None = None
    misaligned_points: int | None = None
    inappropriate_mark_pct: float | None = None


REPLY_MODELS: dict[Dimension, type[AuditReply]] = {"DA": DaReply, "TR": TrReply, "RR": RrReply, "AA": AaReply}
REPLY_SCHEMAS: dict[Dimension, str] = {
    "DA": '{"total_points": <int>, "errors": [<string>, ...]}',
    "TR": '{"total_chars": <int>, "error_chars": <int>}',
    "RR": '{"total_points": <int>, "violations": [<string>, ...]}',
    "AA": (
        '{"label_error_pct": <number|null>, "total_points": <int|null>, "misaligned_points": <int|null>, '
        '"inappropriate_mark_pct": <number|null>}'
    ),
}


# reports


class DaReport(BaseModel):
    """Data accuracy counts."""

    model_config = ConfigDict(frozen=True)

    dimension: Literal["DA"] = "DA"
    n_total: PositiveInt
    n_error: NonNegativeInt

    @model_validator(mode="after")
    def _check_counts(self) -> Self:
        if self.n_error > self.n_total:
            msg = "n_error must not exceed n_total"
            raise ValueError(msg)
        return self


class TrReport(BaseModel):
    """Text rendering character counts."""

    model_config = ConfigDict(frozen=True)

    dimension: Literal["TR"] = "TR"
    l_total: NonNegativeInt
    l_error: NonNegativeInt

    @model_validator(mode="after")
    def _check_counts(self) -> Self:
        if self.l_error > self.l_total:
            msg = "l_error must not exceed l_total"
            raise ValueError(msg)
        return self


class RrReport(BaseModel):
    """Relative relationship counts."""

    model_config = ConfigDict(frozen=True)

    dimension: Literal["RR"] = "RR"
    n_total: PositiveInt
    n_error: NonNegativeInt

    @model_validator(mode="after")
    def _check_counts(self) -> Self:
        if self.n_error > self.n_total:
            msg = "n_error must not exceed n_total"
            raise ValueError(msg)
        return self


class Alignment(BaseModel):
    """Misaligned data points out of all labelled data points."""

    model_config = ConfigDict(frozen=True)

    n_misaligned: NonNegativeInt
    n_total: PositiveInt

    @model_validator(mode="after")
    def _check_counts(self) -> Self:
        if self.n_misaligned > self.n_total:
            msg = "n_misaligned must not exceed n_total"
            raise ValueError(msg)
        return self


class AaReport(BaseModel):
    """Additional information sub-metric inputs. Every field is optional."""

    model_config = ConfigDict(frozen=True)

    dimension: Literal["AA"] = "AA"
    label_error_pct: UnitInterval | None = None
    misaligned: Alignment | None = None
    mark_inappropriate_pct: UnitInterval | None = None


DimensionReport = Annotated[DaReport | TrReport | RrReport | AaReport, Field(discriminator="dimension")]


class DimensionScores(BaseModel):
    """Dimension scores of one image and their aggregate. AQ is on 0-10, everything else on 0-100."""

    model_config = ConfigDict(frozen=True)

    da: Percentage
    tr: Percentage
    rr: Percentage
    aa: Percentage | None = None
    aq: Annotated[float, Field(ge=0.0, le=10.0)]
    score: Percentage


# clamping


def _clamp_int(value: int, low: int, high: int, what: str) -> int:
    clamped = min(max(value, low), high)
    if clamped != value:
        _logger.warning("Auditor value %s=%d clamped to %d", what, value, clamped)
    return clamped


def _clamp_fraction(value: float | None, what: str) -> float | None:
    if value is None:
        return None
    if math.isnan(value):
        _logger.warning("Auditor value %s is NaN, treating it as absent", what)
        return None
    clamped = min(max(value, 0.0), 1.0)
    if clamped != value:
        _logger.warning("Auditor value %s=%s clamped to %s", what, value, clamped)
    return clamped


def clamp_reply(reply: AuditReply) -> DaReport | TrReport | RrReport | AaReport:
    """Turns a validated auditor reply into a report, clamping out-of-range values with a warning.

    Counts derive from list lengths where lists are given.

    Args:
        reply: The auditor reply.

    Returns:
        The report.

    """
    if isinstance(reply, DaReply | RrReply):
        listed = reply.errors if isinstance(reply, DaReply) else reply.violations
        n_total = _clamp_int(reply.total_points, 1, max(reply.total_points, 1), "total_points")
        n_error = _clamp_int(len(listed), 0, n_total, "error count")
        if isinstance(reply, DaReply):
            return DaReport(n_total=n_total, n_error=n_error)
        return RrReport(n_total=n_total, n_error=n_error)

    if isinstance(reply, TrReply):
        l_total = _clamp_int(reply.total_chars, 0, max(reply.total_chars, 0), "total_chars")
        l_error = _clamp_int(reply.error_chars, 0, l_total, "error_chars")
        return TrReport(l_total=l_total, l_error=l_error)

    if not isinstance(reply, AaReply):
        msg = f"Unsupported reply type {type(reply).__name__}"
        raise TypeError(msg)
    misaligned = None
    if reply.total_points is not None and reply.misaligned_points is not None:
        if reply.total_points >= 1:
            n_total = reply.total_points
            n_misaligned = _clamp_int(reply.misaligned_points, 0, n_total, "misaligned_points")
            misaligned = Alignment(n_misaligned=n_misaligned, n_total=n_total)
        else:
            _logger.warning("Auditor reported %d labelled points, alignment sub-metric dropped", reply.total_points)
    return AaReport(
        label_error_pct=_clamp_fraction(reply.label_error_pct, "label_error_pct"),
        misaligned=misaligned,
        mark_inappropriate_pct=_clamp_fraction(reply.inappropriate_mark_pct, "inappropriate_mark_pct"),
    )
