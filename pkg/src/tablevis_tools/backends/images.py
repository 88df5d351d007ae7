#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Image blobs and the deterministic PNG stamps produced by mock image backends."""

from __future__ import annotations

import base64
import hashlib
import io
from typing import TYPE_CHECKING, Self

from PIL import Image, UnidentifiedImageError
from pydantic import BaseModel, ConfigDict, PositiveInt, model_validator

from tablevis_tools.core import consts

if TYPE_CHECKING:
    from pathlib import Path


class ImageBlob(BaseModel):
    """Immutable image bytes with their SHA-256 digest and, when decodable, their pixel size."""

    model_config = ConfigDict(frozen=True)

    data: bytes
    media_type: str = "image/png"
    sha256: str
    width: PositiveInt | None = None
    height: PositiveInt | None = None

    @model_validator(mode="after")
    def _check_digest(self) -> Self:
        if hashlib.sha256(self.data).hexdigest() != self.sha256:
            msg = "sha256 does not match the blob bytes"
            raise ValueError(msg)
        return self

    @classmethod
    def from_bytes(cls, data: bytes, media_type: str | None = None) -> ImageBlob:
        """Builds a blob, computing the digest and decoding the size when possible.

        Args:
            data: Image bytes.
            media_type: Media type. Detected from the image format when not provided.

        Returns:
            The blob.

        """
        width = height = None
        detected = None
        try:
            with Image.open(io.BytesIO(data)) as img:
                width, height = img.size
                detected = Image.MIME.get(img.format or "")
        except (UnidentifiedImageError, OSError):
            pass
        return cls(
            data=data,
            media_type=media_type or detected or "application/octet-stream",
            sha256=hashlib.sha256(data).hexdigest(),
            width=width,
            height=height,
        )

    @classmethod
    def from_file(cls, path: Path) -> ImageBlob:
        """Reads a blob from disk.

        Args:
            path: The image path.

        Returns:
            The blob.

        """
        return cls.from_bytes(path.read_bytes())

    def data_url(self) -> str:
        """The blob as a `data:<media_type>;base64,...` URL."""
        return f"data:{self.media_type};base64,{base64.b64encode(self.data).decode('ascii')}"


def stamp_image(seed: bytes) -> ImageBlob:
    """Renders a tiny PNG whose pixels are the SHA-256 digest of `seed`.

    Distinct seeds give distinct images, identical seeds give byte-identical images.

    Args:
        seed: Arbitrary seed bytes.

    Returns:
        The PNG blob.

    """
    width, height = consts.reproducibility.MOCK_STAMP_SIZE
    digest = hashlib.sha256(seed).digest()
    n_bytes = width * height * 3
    pixels = (digest * (n_bytes // len(digest) + 1))[:n_bytes]
    buffer = io.BytesIO()
    Image.frombytes("RGB", (width, height), pixels).save(buffer, format="PNG")
    return ImageBlob.from_bytes(buffer.getvalue(), media_type="image/png")
