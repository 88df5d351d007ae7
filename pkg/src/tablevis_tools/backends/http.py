#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Backend speaking the OpenAI-compatible JSON-over-HTTP wire protocol.

Endpoints used, relative to `BackendConfig.endpoint`:

* `POST /chat/completions` for chat with text and `image_url` (data URL) parts.
* `POST /images/generations` and `POST /images/edits` with `response_format=b64_json`.
* `POST /aesthetic/score` with `{"model": ..., "image": <data URL>}`, answering `{"score": <float>}`.

"""

from __future__ import annotations

import base64
import binascii
import os
from typing import TYPE_CHECKING, Any

import requests

from tablevis_tools.backends.base import Backend, ChatMessage, ImagePart
from tablevis_tools.backends.images import ImageBlob
from tablevis_tools.core.exceptions import AuthError, ContentRefusedError, ProtocolError, TransientBackendError
from tablevis_tools.utils.logging import get_logger

if TYPE_CHECKING:
    from tablevis_tools.core.config import BackendConfig

_logger = get_logger(__name__)

_REFUSAL_CODES = {"content_policy_violation", "content_filter", "moderation_blocked", "safety_violation"}
_SERVER_ERROR = 500
_TOO_MANY_REQUESTS = 429
_AUTH_STATUSES = {401, 403}
_BAD_REQUEST = 400


def _parse_retry_after(value: str | None) -> float | None:
    if value is None:
        return None
    try:
        return max(float(value), 0.0)
    except ValueError:
        return None


def _error_code(response: requests.Response) -> str:
    try:
        body = response.json()
    except ValueError:
        return ""
    error = body.get("error") if isinstance(body, dict) else None
    if isinstance(error, dict):
        return str(error.get("code") or error.get("type") or "")
    return ""


def encode_messages(messages: list[ChatMessage]) -> list[dict[str, Any]]:
    """Converts chat messages into the wire `messages` array.

    Args:
        messages: The conversation.

    Returns:
        JSON compatible message dicts with `text` and `image_url` content parts.

    """
    encoded = []
    for message in messages:
        content: list[dict[str, Any]] = []
        for part in message.parts:
            if isinstance(part, ImagePart):
                content.append({"type": "image_url", "image_url": {"url": part.image.data_url()}})
            else:
                content.append({"type": "text", "text": part.text})
        encoded.append({"role": message.role, "content": content})
    return encoded


class HttpBackend(Backend):
    """Backend for one HTTP endpoint. The API key is read from the environment variable named in the config."""

    def _api_key(self) -> str:
        env_name = self.cfg.api_key_env
        if not env_name:
            msg = f"No `api_key_env` configured for {self.describe()}"
            raise AuthError(msg)
        key = os.environ.get(env_name)
        if not key:
            msg = f"Environment variable {env_name} with the API key for {self.describe()} is not set"
            raise AuthError(msg)
        return key

    def _post(self, path: str, payload: dict[str, Any]) -> dict[str, Any]:
        headers = {"Authorization": f"Bearer {self._api_key()}", "Content-Type": "application/json"}
        url = f"{(self.cfg.endpoint or '').rstrip('/')}/{path}"
        try:
            response = requests.post(url, json=payload, headers=headers, timeout=self.cfg.timeout_s)
        except (requests.Timeout, requests.ConnectionError) as ex:
            msg = f"POST {url} failed: {ex}"
            raise TransientBackendError(msg) from ex

        status = response.status_code
        if status == _TOO_MANY_REQUESTS:
            msg = f"POST {url} was rate limited"
            raise TransientBackendError(msg, retry_after=_parse_retry_after(response.headers.get("Retry-After")))
        if status >= _SERVER_ERROR:
            msg = f"POST {url} returned HTTP {status}: {response.text[:200]}"
            raise TransientBackendError(msg)
        if status in _AUTH_STATUSES:
            msg = f"POST {url} rejected the API key (HTTP {status})"
            raise AuthError(msg)
        if status >= _BAD_REQUEST:
            if _error_code(response) in _REFUSAL_CODES:
                msg = f"POST {url} refused the request: {response.text[:200]}"
                raise ContentRefusedError(msg)
            msg = f"POST {url} returned HTTP {status}: {response.text[:200]}"
            raise ProtocolError(msg)

        try:
            body = response.json()
        except ValueError as ex:
            msg = f"POST {url} returned a body that is not JSON"
            raise ProtocolError(msg) from ex
        if not isinstance(body, dict):
            msg = f"POST {url} returned a JSON {type(body).__name__}, expected an object"
            raise ProtocolError(msg)
        return body

    def _chat(self, messages: list[ChatMessage]) -> str:
        body = self._post("chat/completions", {"model": self.cfg.model_name, "messages": encode_messages(messages)})
        try:
            content = body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as ex:
            msg = "Chat response has no choices[0].message.content"
            raise ProtocolError(msg) from ex
        if isinstance(content, list):
            content = "".join(part.get("text", "") for part in content if isinstance(part, dict))
        if not isinstance(content, str):
            msg = "Chat response content is not text"
            raise ProtocolError(msg)
        return content

    def _image_from(self, body: dict[str, Any]) -> ImageBlob:
        try:
            encoded = body["data"][0]["b64_json"]
            data = base64.b64decode(encoded, validate=True)
        except (KeyError, IndexError, TypeError, binascii.Error) as ex:
            msg = "Image response has no valid data[0].b64_json"
            raise ProtocolError(msg) from ex
        if not data:
            msg = "Image response is empty"
            raise ProtocolError(msg)
        return ImageBlob.from_bytes(data)

    def _generate(self, prompt: str, seed: int | None) -> ImageBlob:
        payload: dict[str, Any] = {"model": self.cfg.model_name, "prompt": prompt, "response_format": "b64_json"}
        if seed is not None:
            payload["seed"] = seed
        return self._image_from(self._post("images/generations", payload))

    def _edit(self, image: ImageBlob, instruction: str, seed: int | None) -> ImageBlob:
        payload: dict[str, Any] = {
            "model": self.cfg.model_name,
            "prompt": instruction,
            "image": image.data_url(),
            "response_format": "b64_json",
        }
        if seed is not None:
            payload["seed"] = seed
        return self._image_from(self._post("images/edits", payload))

    def _aesthetic(self, image: ImageBlob) -> float:
        body = self._post("aesthetic/score", {"model": self.cfg.model_name, "image": image.data_url()})
        score = body.get("score")
        if isinstance(score, bool) or not isinstance(score, int | float):
            msg = "Aesthetic response has no numeric `score`"
            raise ProtocolError(msg)
        _logger.debug("Aesthetic score %.3f for image %s", score, image.sha256[:12])
        return float(score)
