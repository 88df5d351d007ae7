#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Reproducibility related consts.

Attributes:
    SEED (int): Random seed used by randomized generators - 42.
    MOCK_STAMP_SIZE (tuple[int, int]): Pixel size of the PNG stamps produced by mock image backends.

"""

from __future__ import annotations

SEED = 42
MOCK_STAMP_SIZE = (8, 4)
