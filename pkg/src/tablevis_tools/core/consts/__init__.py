#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""The constants to be used across the project."""

from __future__ import annotations

from tablevis_tools.core.consts import compute, directories, logging, pipeline, reproducibility

__all__ = [
    "compute",
    "directories",
    "logging",
    "pipeline",
    "reproducibility",
]
