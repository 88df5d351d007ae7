#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

import logging
import pathlib
import typing

import pytest

from tablevis_tools.backends import clear_backend_cache

if typing.TYPE_CHECKING:
    from collections.abc import Iterator

    from _pytest.config import Config
    from _pytest.python import Function

MARKERS = ["unit", "live"]
FIXTURES_DIR = pathlib.Path(__file__).parent / "fixtures"


def pytest_collection_modifyitems(config: Config, items: list[Function]) -> None:  # noqa: ARG001
    rootdir = pathlib.Path(__file__).parent.parent
    for item in items:
        rel_path = pathlib.Path(item.fspath).relative_to(rootdir)
        mark_name = rel_path.as_posix().split("/")[1]
        if mark_name in MARKERS:
            mark = getattr(pytest.mark, mark_name)
            item.add_marker(mark)


@pytest.fixture(autouse=True)
def _fresh_backends() -> Iterator[None]:
    clear_backend_cache()
    yield
    clear_backend_cache()


@pytest.fixture(autouse=True)
def _close_log_files() -> Iterator[None]:
    yield
    for logger in [logging.getLogger(name) for name in list(logging.Logger.manager.loggerDict)]:
        for handler in [h for h in logger.handlers if isinstance(h, logging.FileHandler)]:
            logger.removeHandler(handler)
            handler.close()


@pytest.fixture
def fixtures_dir() -> pathlib.Path:
    return FIXTURES_DIR
