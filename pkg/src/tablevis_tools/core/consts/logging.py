#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Logging consts.

Attributes:
    FORMAT (str): Default log format. Includes the thread name since pipeline runs share worker pools.
    LOG_FILE_NAME (str): Name of the log file written next to CLI outputs.

"""

from __future__ import annotations

FORMAT = "%(asctime)s:%(threadName)s:%(name)s:%(levelname)s:%(lineno)d:%(message)s"
LOG_FILE_NAME = "tablevis.log"
