#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Core module: consts, settings, run configuration and the exception hierarchy."""

from __future__ import annotations

from tablevis_tools.core import consts

__all__ = ["consts"]
