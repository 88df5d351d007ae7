#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Pipeline, benchmark and data construction consts.

Attributes:
    MAX_ROUNDS (int): Default maximum number of reflect/refine rounds.
    MIN_RESOLUTION (int): Minimum accepted image side length in pixels.
    ROLLOUT_K (int): Default number of refinement candidates per rollout sample.
    REWARD_MODEL_WEIGHT (float): Weight of the preference reward model in the blended reward.
    IMAGE_REWARD_WEIGHT (float): Weight of the aesthetic image reward in the blended reward.
    AQ_SCALE (float): Multiplier that brings the 0-10 aesthetic score onto the 0-100 scale.
    HISTOGRAM_BUCKET_WIDTH (int): Width of a data-point histogram bucket.
    HISTOGRAM_OVERFLOW (int): Lower bound of the overflow histogram bucket.
    SCHEMA_VERSION (int): Version stamped on every persisted document.
    MAX_IN_FLIGHT (int): Default cap of concurrent requests per backend endpoint.

"""

from __future__ import annotations

MAX_ROUNDS = 3
MIN_RESOLUTION = 200
ROLLOUT_K = 5
REWARD_MODEL_WEIGHT = 0.8
IMAGE_REWARD_WEIGHT = 0.2
AQ_SCALE = 10.0
HISTOGRAM_BUCKET_WIDTH = 5
HISTOGRAM_OVERFLOW = 40
SCHEMA_VERSION = 1
MAX_IN_FLIGHT = 4
