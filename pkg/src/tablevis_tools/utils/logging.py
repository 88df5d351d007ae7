#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Logging utils."""

from __future__ import annotations

import contextlib
import logging
import time
from typing import TYPE_CHECKING

from tablevis_tools.core import consts

if TYPE_CHECKING:
    from collections.abc import Generator
    from pathlib import Path

_PACKAGE_LOGGERS: set[str] = set()


def get_logger(name: str, log_level: int | str = logging.INFO) -> logging.Logger:
    """Builds a `Logger` instance with provided name and log level.

    Args:
        name: The name for the logger.
        log_level: The default log level.

    Returns:
        The logger.

    """
    logger = logging.getLogger(name=name)
    logger.setLevel(log_level)

    # Prevent log messages from propagating to the parent logger
    logger.propagate = False

    if not logger.handlers:
        stream_handler = logging.StreamHandler()
        stream_handler.setFormatter(fmt=logging.Formatter(fmt=consts.logging.FORMAT))
        logger.addHandler(stream_handler)

    _PACKAGE_LOGGERS.add(name)
    return logger


def configure_package_logging(log_level: int | str, log_file: Path | None = None) -> None:
    """Applies the log level, and optionally a file handler, to every logger built by `get_logger`.

    Args:
        log_level: The log level to set.
        log_file: Optional log file shared by all package loggers.

    """
    file_handler = None
    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(fmt=consts.logging.FORMAT))

    for name in sorted(_PACKAGE_LOGGERS):
        logger = logging.getLogger(name)
        logger.setLevel(log_level)
        if file_handler is None:
            continue
        # one log file per process invocation
        for handler in [h for h in logger.handlers if isinstance(h, logging.FileHandler)]:
            logger.removeHandler(handler)
            handler.close()
        logger.addHandler(file_handler)


_timed_logger = get_logger("timed", log_level=logging.INFO)


@contextlib.contextmanager
def timing_context(name: str) -> Generator[None]:
    """Logs the execution time of the wrapped block.

    Notes:
        Can also act as a decorator.

    Args:
        name: The name of the wrapped execution block.

    Returns:
        A context manager that logs the execution time.

    """
    _timed_logger.info("%(func_name)s is running...", {"func_name": name})
    t0 = time.monotonic()
    try:
        yield
    finally:
        t1 = time.monotonic()
        _timed_logger.info(
            "%(func_name)s ran in %(execution_time)s",
            {
                "func_name": name,
                "execution_time": f"{(t1 - t0):.4f}",
            },
        )
