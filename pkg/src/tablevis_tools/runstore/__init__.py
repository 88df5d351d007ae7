#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Run artifact persistence."""

from __future__ import annotations

from tablevis_tools.runstore.store import RunStore, StoreViolation, is_safe_segment, verify_store

__all__ = ["RunStore", "StoreViolation", "is_safe_segment", "verify_store"]
