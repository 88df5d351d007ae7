"""Project directory related consts.

Attributes:
    ROOT_DIR (Path): Package root directory.
    TEMPLATES_DIR (Path): Directory with the bundled prompt templates.

"""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

from pathlib import Path

ROOT_DIR = Path(__file__).resolve().parents[4]
TEMPLATES_DIR = Path(__file__).resolve().parents[2] / "templates"
