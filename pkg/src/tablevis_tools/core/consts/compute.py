#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Compute related consts.

Attributes:
    DEFAULT_CONCURRENCY (int): Default number of benchmark instances in flight.

"""

from __future__ import annotations

DEFAULT_CONCURRENCY = 4
