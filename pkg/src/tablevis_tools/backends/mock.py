#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Scripted, fully offline backend used by tests and `--mock` runs."""

from __future__ import annotations

import hashlib
import threading
import time
from collections import deque
from typing import TYPE_CHECKING

from tablevis_tools.backends.base import Backend, ChatMessage
from tablevis_tools.backends.images import ImageBlob, stamp_image
from tablevis_tools.core.exceptions import ContentRefusedError, ProtocolError, TransientBackendError

if TYPE_CHECKING:
    from tablevis_tools.core.config import BackendConfig, MockScript


def _request_text(messages: list[ChatMessage]) -> str:
    return "\n".join(message.text for message in messages)


def _request_digest(messages: list[ChatMessage]) -> bytes:
    h = hashlib.sha256(_request_text(messages).encode("utf-8"))
    for message in messages:
        for image in message.images:
            h.update(image.sha256.encode("ascii"))
    return h.digest()


class MockBackend(Backend):
    """Backend driven by a `MockScript`.

    Chat replies come from the response queue first, then from the first rule whose `contains` occurs in the
    request text, then from the script default. Image outputs are PNG stamps derived from the request, so the
    same request always yields the same bytes.

    Args:
        cfg: A `mock` backend config.

    """

    def __init__(self, cfg: BackendConfig) -> None:
        super().__init__(cfg)
        if cfg.script is None:
            msg = "Mock backend requires a script"
            raise ValueError(msg)
        self.script: MockScript = cfg.script
        self.requests: list[list[ChatMessage]] = []
        self._queue = deque(self.script.responses)
        self._failures_left = self.script.fail_first
        self._script_lock = threading.Lock()

    def _before_attempt(self) -> None:
        if self.script.latency_ms:
            time.sleep(self.script.latency_ms / 1000)
        with self._script_lock:
            if self._failures_left > 0:
                self._failures_left -= 1
                msg = "Scripted transient failure"
                raise TransientBackendError(msg)

    def _chat(self, messages: list[ChatMessage]) -> str:
        self._before_attempt()
        text = _request_text(messages)
        with self._script_lock:
            self.requests.append(messages)
            if self._queue:
                return self._queue.popleft()
        for rule in self.script.rules:
            if rule.contains in text:
                if len(rule.replies) == 1:
                    return rule.replies[0]
                return rule.replies[int.from_bytes(_request_digest(messages)[:8], "big") % len(rule.replies)]
        if self.script.default is not None:
            return self.script.default
        msg = f"Mock script {self.script.name!r} has no reply for the request"
        raise ProtocolError(msg)

    def _generate(self, prompt: str, seed: int | None) -> ImageBlob:
        self._before_attempt()
        if self.script.refuse_images:
            msg = "Scripted content refusal"
            raise ContentRefusedError(msg)
        payload = prompt.encode("utf-8")
        if seed is not None:
            payload += f"\x00seed={seed}".encode()
        return stamp_image(payload)

    def _edit(self, image: ImageBlob, instruction: str, seed: int | None) -> ImageBlob:
        self._before_attempt()
        if self.script.refuse_images:
            msg = "Scripted content refusal"
            raise ContentRefusedError(msg)
        payload = image.sha256.encode("ascii") + b"\x00" + instruction.encode("utf-8")
        if seed is not None:
            payload += f"\x00seed={seed}".encode()
        return stamp_image(payload)

    def _aesthetic(self, image: ImageBlob) -> float:
        self._before_attempt()
        if self.script.aesthetic_value is not None:
            return self.script.aesthetic_value
        return int(image.sha256[:8], 16) / 0xFFFFFFFF * 10
