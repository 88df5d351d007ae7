#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Model backends: chat completion, image generation, image editing and aesthetic scoring.

Backend clients are cached per config, so every run of a process that uses the same endpoint shares one
client and one in-flight cap.
"""

from __future__ import annotations

import threading
from typing import TYPE_CHECKING

from tablevis_tools.backends.base import Backend, ChatMessage, ImagePart, TextPart
from tablevis_tools.backends.http import HttpBackend
from tablevis_tools.backends.images import ImageBlob, stamp_image
from tablevis_tools.backends.mock import MockBackend

if TYPE_CHECKING:
    from collections.abc import Sequence

    from tablevis_tools.core.config import BackendConfig

__all__ = [
    "Backend",
    "ChatMessage",
    "HttpBackend",
    "ImageBlob",
    "ImagePart",
    "MockBackend",
    "TextPart",
    "aesthetic_score",
    "chat_complete",
    "clear_backend_cache",
    "edit_image",
    "generate_image",
    "get_backend",
    "stamp_image",
]

_cache: dict[str, Backend] = {}
_cache_lock = threading.Lock()


def get_backend(cfg: BackendConfig) -> Backend:
    """Returns the shared client for a backend config, creating it on first use.

    Args:
        cfg: The backend config.

    Returns:
        The backend client.

    """
    key = cfg.model_dump_json()
    with _cache_lock:
        backend = _cache.get(key)
        if backend is None:
            backend = HttpBackend(cfg) if cfg.kind == "http" else MockBackend(cfg)
            _cache[key] = backend
        return backend


def clear_backend_cache() -> None:
    """Drops all cached clients, resetting mock scripts and call counters."""
    with _cache_lock:
        _cache.clear()


def chat_complete(cfg: BackendConfig, messages: Sequence[ChatMessage]) -> str:
    """Sends a conversation to the configured chat backend and returns the full reply."""
    return get_backend(cfg).chat_complete(messages)


def generate_image(cfg: BackendConfig, prompt: str, seed: int | None = None) -> ImageBlob:
    """Generates an image from a non-empty text prompt."""
    return get_backend(cfg).generate_image(prompt, seed=seed)


def edit_image(cfg: BackendConfig, image: ImageBlob, instruction: str, seed: int | None = None) -> ImageBlob:
    """Edits an image following a non-empty instruction."""
    return get_backend(cfg).edit_image(image, instruction, seed=seed)


def aesthetic_score(cfg: BackendConfig, image: ImageBlob) -> float:
    """Scores an image on the [0, 10] aesthetic scale."""
    return get_backend(cfg).aesthetic_score(image)
