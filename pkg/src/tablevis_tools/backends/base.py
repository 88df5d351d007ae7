#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Chat messages and the retrying, in-flight capped backend base class."""

from __future__ import annotations

import abc
import math
import random
import threading
from collections import Counter
from typing import TYPE_CHECKING, Annotated, Any, Literal, TypeVar

import backoff
from pydantic import BaseModel, ConfigDict, Field

from tablevis_tools.backends.images import ImageBlob
from tablevis_tools.core.exceptions import ProtocolError, TransientBackendError, TransportError
from tablevis_tools.utils.logging import get_logger

if TYPE_CHECKING:
    from collections.abc import Callable, Generator, Sequence

    from tablevis_tools.core.config import BackendConfig

_logger = get_logger(__name__)

T = TypeVar("T")

AESTHETIC_MIN = 0.0
AESTHETIC_MAX = 10.0


class TextPart(BaseModel):
    """Text part of a chat message."""

    model_config = ConfigDict(frozen=True)

    type: Literal["text"] = "text"
    text: str


class ImagePart(BaseModel):
    """Image part of a chat message."""

    model_config = ConfigDict(frozen=True)

    type: Literal["image"] = "image"
    image: ImageBlob


MessagePart = Annotated[TextPart | ImagePart, Field(discriminator="type")]


class ChatMessage(BaseModel):
    """One chat message made of ordered text and image parts."""

    model_config = ConfigDict(frozen=True)

    role: Literal["system", "user", "assistant"]
    parts: tuple[MessagePart, ...] = Field(min_length=1)

    @classmethod
    def build(cls, role: Literal["system", "user", "assistant"], *parts: str | ImageBlob) -> ChatMessage:
        """Builds a message from strings and image blobs.

        Args:
            role: The message role.
            *parts: Text and images, in order.

        Returns:
            The message.

        """
        return cls(
            role=role,
            parts=tuple(ImagePart(image=p) if isinstance(p, ImageBlob) else TextPart(text=p) for p in parts),
        )

    @property
    def text(self) -> str:
        """All text parts joined by newlines."""
        return "\n".join(part.text for part in self.parts if isinstance(part, TextPart))

    @property
    def images(self) -> list[ImageBlob]:
        """All image parts, in order."""
        return [part.image for part in self.parts if isinstance(part, ImagePart)]


def _retry_delays(base_s: float) -> Generator[float, BaseException | None, None]:
    """Backoff wait generator: honours `retry_after` hints, else exponential backoff with equal jitter."""
    exc = yield 0.0
    attempt = 0
    while True:
        retry_after = getattr(exc, "retry_after", None)
        if retry_after is not None:
            delay = float(retry_after)
        else:
            ceiling = base_s * 2**attempt
            delay = ceiling / 2 + random.uniform(0, ceiling / 2)  # noqa: S311
        attempt += 1
        exc = yield delay


class Backend(abc.ABC):
    """Client for the chat, generation, editing and aesthetic scoring capabilities of one endpoint.

    Clients are shared across concurrent runs. Every call goes through `_call`, which caps the number of
    requests in flight, retries transient failures and keeps call counters.

    Args:
        cfg: The backend config.

    """

    def __init__(self, cfg: BackendConfig) -> None:
        self.cfg = cfg
        self.calls: Counter[str] = Counter()
        self.attempts: Counter[str] = Counter()
        self.peak_in_flight = 0
        self._in_flight = 0
        self._slots = threading.BoundedSemaphore(cfg.max_in_flight)
        self._lock = threading.Lock()

    def chat_complete(self, messages: Sequence[ChatMessage]) -> str:
        """Sends a conversation and returns the full assistant reply.

        Args:
            messages: The conversation.

        Returns:
            The reply text.

        """
        if not messages:
            msg = "At least one chat message is required"
            raise ValueError(msg)
        return self._call("chat", lambda: self._chat(list(messages)))

    def generate_image(self, prompt: str, seed: int | None = None) -> ImageBlob:
        """Generates an image from a text prompt.

        Args:
            prompt: Non-empty generation prompt.
            seed: Optional sampling seed, passed on when the backend supports it.

        Returns:
            The generated image.

        """
        if not prompt.strip():
            msg = "Generation prompt must not be empty"
            raise ValueError(msg)
        return self._call("generate", lambda: self._generate(prompt, seed))

    def edit_image(self, image: ImageBlob, instruction: str, seed: int | None = None) -> ImageBlob:
        """Edits an image following an instruction.

        Args:
            image: The input image.
            instruction: Non-empty edit instruction.
            seed: Optional sampling seed, passed on when the backend supports it.

        Returns:
            The edited image.

        """
        if not instruction.strip():
            msg = "Edit instruction must not be empty"
            raise ValueError(msg)
        return self._call("edit", lambda: self._edit(image, instruction, seed))

    def aesthetic_score(self, image: ImageBlob) -> float:
        """Scores the aesthetic quality of an image.

        Args:
            image: The image.

        Returns:
            The score clamped to [0, 10].

        """
        raw = self._call("aesthetic", lambda: self._aesthetic(image))
        if math.isnan(raw):
            msg = "Aesthetic backend returned NaN"
            raise ProtocolError(msg)
        clamped = min(max(raw, AESTHETIC_MIN), AESTHETIC_MAX)
        if clamped != raw:
            _logger.warning("Aesthetic score %s clamped to %s", raw, clamped)
        return clamped

    def _call(self, operation: str, fn: Callable[[], T]) -> T:
        attempts = 0

        def attempt() -> T:
            nonlocal attempts
            attempts += 1
            with self._slots:
                with self._lock:
                    self._in_flight += 1
                    self.peak_in_flight = max(self.peak_in_flight, self._in_flight)
                try:
                    return fn()
                finally:
                    with self._lock:
                        self._in_flight -= 1

        def on_backoff(details: dict[str, Any]) -> None:
            _logger.warning(
                "%s call to %s failed (%s), retry %d/%d in %.3fs",
                operation,
                self.describe(),
                details.get("exception"),
                details["tries"],
                self.cfg.max_retries,
                details["wait"],
            )

        retrying = backoff.on_exception(
            _retry_delays,
            TransientBackendError,
            max_tries=self.cfg.max_retries + 1,
            jitter=None,
            logger=None,
            on_backoff=on_backoff,
            base_s=self.cfg.backoff_base_ms / 1000,
        )(attempt)

        with self._lock:
            self.calls[operation] += 1
        try:
            return retrying()
        except TransientBackendError as ex:
            msg = f"{operation} call to {self.describe()} failed after {attempts} attempts: {ex}"
            raise TransportError(msg) from ex
        finally:
            with self._lock:
                self.attempts[operation] += attempts

    def describe(self) -> str:
        """Short human readable backend name for logs."""
        return f"{self.cfg.kind}:{self.cfg.model_name or self.cfg.endpoint or '-'}"

    @abc.abstractmethod
    def _chat(self, messages: list[ChatMessage]) -> str: ...

    @abc.abstractmethod
    def _generate(self, prompt: str, seed: int | None) -> ImageBlob: ...

    @abc.abstractmethod
    def _edit(self, image: ImageBlob, instruction: str, seed: int | None) -> ImageBlob: ...

    @abc.abstractmethod
    def _aesthetic(self, image: ImageBlob) -> float: ...
