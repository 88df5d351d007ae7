#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Self-correcting table visualization pipeline."""

from __future__ import annotations

from tablevis_tools.pipeline.models import ReflectionVerdict, RewriteOutput, RoundRecord, RunFailure, RunRecord
from tablevis_tools.pipeline.runner import load_run, replay_lineage, run_key, run_pipeline
from tablevis_tools.pipeline.stages import parse_reflection, parse_rewrite, reflect, refine, rewrite
from tablevis_tools.pipeline.templates import PromptTemplate, load_template

__all__ = [
    "PromptTemplate",
    "ReflectionVerdict",
    "RewriteOutput",
    "RoundRecord",
    "RunFailure",
    "RunRecord",
    "load_run",
    "load_template",
    "parse_reflection",
    "parse_rewrite",
    "reflect",
    "refine",
    "replay_lineage",
    "rewrite",
    "run_key",
    "run_pipeline",
]
