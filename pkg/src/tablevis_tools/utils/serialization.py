#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Serialization utils."""

from __future__ import annotations

import json
from datetime import date, datetime
from decimal import Decimal
from json import JSONEncoder
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel


class JsonEncoder(JSONEncoder):
    """JSON encoder for the datatypes that show up in run documents and are not supported by `json` itself."""

    def default(self, o: Any) -> Any:
        """Default JSON encoding logic.

        Args:
            o: Object to be serialized.

        Returns:
            A JSON compatible representation of the object.

        """
        if isinstance(o, date | datetime):
            return o.isoformat()

        if isinstance(o, Path):
            return o.as_posix()

        if isinstance(o, BaseModel):
            return o.model_dump(mode="json")

        if isinstance(o, Decimal):
            return str(o)

        if isinstance(o, np.generic):
            return o.item()

        return super().default(o)


def dumps_document(payload: Any) -> str:
    """Serializes a run document deterministically: sorted keys, two space indent, trailing newline.

    Args:
        payload: The document. Pydantic models are dumped in JSON mode.

    Returns:
        The JSON text.

    """
    return json.dumps(payload, cls=JsonEncoder, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def dumps_record(payload: Any) -> str:
    """Serializes one JSON lines record (sorted keys, no newlines inside).

    Args:
        payload: The record.

    Returns:
        The single line JSON text, without the line terminator.

    """
    return json.dumps(payload, cls=JsonEncoder, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
