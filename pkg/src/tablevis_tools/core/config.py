#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Run configuration models.

A run configuration is one JSON document with a backend section per pipeline role:

```json
{
  "pipeline": {
    "max_rounds": 3,
    "rewrite": {"kind": "http", "endpoint": "https://...", "model_name": "...", "api_key_env": "REWRITE_KEY"},
    "generate": {...},
    "reflect": {...},
    "refine": {...}
  },
  "judge": {"judge": {...}, "aesthetic": {...}},
  "judge_secondary": {...}
}
```

"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Literal, Self

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    ValidationError,
    model_validator,
)

from tablevis_tools.core import consts
from tablevis_tools.core.exceptions import ConfigError

PipelineMode = Literal["full", "rewrite_only", "direct"]


class MockRule(BaseModel):
    """Scripted reply selected when the request text contains `contains`."""

    model_config = ConfigDict(frozen=True)

    contains: str
    """Substring looked up in the request text."""
    replies: tuple[str, ...] = Field(min_length=1)
    """Candidate replies. With more than one, the reply is picked by a digest of the request."""


class MockScript(BaseModel):
    """Behaviour of a scripted mock backend."""

    model_config = ConfigDict(frozen=True)

    name: str = "mock"
    """Distinguishes otherwise identical scripts."""
    responses: tuple[str, ...] = ()
    """Chat replies consumed in order before rules and the default apply."""
    rules: tuple[MockRule, ...] = ()
    """Request dependent replies, checked in order."""
    default: str | None = None
    """Reply used when the queue is exhausted and no rule matches."""
    fail_first: NonNegativeInt = 0
    """Number of initial attempts that fail with a transient error."""
    refuse_images: bool = False
    """Makes image generation and editing fail with a content refusal."""
    aesthetic_value: float | None = None
    """Raw aesthetic score returned instead of the digest-derived one."""
    latency_ms: NonNegativeInt = 0
    """Artificial latency added to every call."""


class BackendConfig(BaseModel):
    """Connection settings of one backend role."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["http", "mock"]
    endpoint: str | None = None
    model_name: str | None = None
    api_key_env: str | None = None
    """Name of the environment variable holding the API key. Keys never live in config files."""
    timeout_s: PositiveFloat = 120.0
    max_retries: NonNegativeInt = 3
    backoff_base_ms: PositiveInt = 500
    max_in_flight: PositiveInt = consts.pipeline.MAX_IN_FLIGHT
    script: MockScript | None = None

    @model_validator(mode="after")
    def _check_kind(self) -> Self:
        if self.kind == "http" and not (self.endpoint and self.model_name):
            msg = "http backends require `endpoint` and `model_name`"
            raise ValueError(msg)
        if self.kind == "mock" and self.script is None:
            msg = "mock backends require a `script`"
            raise ValueError(msg)
        return self

    @classmethod
    def mock(cls, script: MockScript | None = None, **kwargs: object) -> BackendConfig:
        """Builds a mock backend config.

        Args:
            script: The mock script. An empty script is used when not provided.
            **kwargs: Other config fields.

        Returns:
            The backend config.

        """
        return cls.model_validate({"kind": "mock", "script": script or MockScript(), **kwargs})


def _fingerprint(model: BaseModel) -> str:
    payload = json.dumps(model.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class PipelineConfig(BaseModel):
    """Configuration of the rewrite, generate, reflect and refine stages."""

    model_config = ConfigDict(frozen=True)

    max_rounds: PositiveInt = consts.pipeline.MAX_ROUNDS
    mode: PipelineMode = "full"
    rewrite: BackendConfig
    generate: BackendConfig
    reflect: BackendConfig
    refine: BackendConfig
    templates_dir: Path | None = None
    """Prompt template directory. The bundled templates are used when not set."""
    include_prior_instructions: bool = False
    """Shows reflection the instructions issued in earlier rounds."""
    include_description: bool = False
    """Shows reflection the rewritten generation prompt."""
    require_rationale: bool = False
    """Rejects rewrite replies without a delimited rationale."""
    rationale_delimiters: tuple[str, str] = ("<think>", "</think>")

    def fingerprint(self) -> str:
        """SHA-256 digest of the canonical JSON form of this config."""
        return _fingerprint(self)


class JudgeConfig(BaseModel):
    """Configuration of the benchmark auditor and aesthetic scorer."""

    model_config = ConfigDict(frozen=True)

    judge: BackendConfig
    aesthetic: BackendConfig
    templates_dir: Path | None = None
    max_workers: PositiveInt = 4
    """Number of dimension audits of one instance executed concurrently."""


class AppConfig(BaseModel):
    """Top level run configuration."""

    model_config = ConfigDict(frozen=True)

    pipeline: PipelineConfig
    judge: JudgeConfig
    judge_secondary: BackendConfig | None = None
    """Second judge used for preference voting and mutual annotation approval."""

    @classmethod
    def from_file(cls, path: Path) -> AppConfig:
        """Loads and validates a JSON config file.

        Args:
            path: The config file path.

        Returns:
            The validated config.

        Raises:
            ConfigError: If the file cannot be read or does not validate.

        """
        try:
            return cls.model_validate_json(path.read_text(encoding="utf-8"))
        except OSError as ex:
            msg = f"Cannot read config file {path.as_posix()}: {ex}"
            raise ConfigError(msg) from ex
        except ValidationError as ex:
            msg = f"Invalid config file {path.as_posix()}:\n{ex}"
            raise ConfigError(msg) from ex

    @classmethod
    def mock(cls, max_rounds: int = consts.pipeline.MAX_ROUNDS, mode: PipelineMode = "full") -> AppConfig:
        """Builds the all-mock offline configuration.

        The scripts are request driven (rules and defaults only), so results do not depend on the order
        in which concurrent instances reach the backends.

        Args:
            max_rounds: Maximum number of reflect/refine rounds.
            mode: Pipeline mode.

        Returns:
            The offline config.

        """
        return cls(
            pipeline=PipelineConfig(
                max_rounds=max_rounds,
                mode=mode,
                rewrite=BackendConfig.mock(MockScript(name="rewrite", default=_MOCK_REWRITE)),
                generate=BackendConfig.mock(MockScript(name="generate")),
                reflect=BackendConfig.mock(
                    MockScript(
                        name="reflect",
                        rules=(MockRule(contains="Round: 1\n", replies=(_MOCK_NEEDS_REFINEMENT,)),),
                        default="The infographic matches the table.\nVERDICT: SATISFACTORY",
                    )
                ),
                refine=BackendConfig.mock(MockScript(name="refine")),
            ),
            judge=JudgeConfig(
                judge=BackendConfig.mock(MockScript(name="judge", rules=_MOCK_JUDGE_RULES)),
                aesthetic=BackendConfig.mock(MockScript(name="aesthetic")),
            ),
            judge_secondary=BackendConfig.mock(MockScript(name="judge-secondary", rules=_MOCK_JUDGE_RULES)),
        )


_MOCK_REWRITE = (
    "<think>The table compares a handful of categories over one numeric measure, so a sorted bar chart with "
    "value labels keeps every data point readable.</think>\n"
    "A clean flat-design infographic with a horizontal bar chart. Each bar is labelled with its category and "
    "exact value, bars are sorted by value, the title sits on top and the background is a soft off-white."
)
_MOCK_NEEDS_REFINEMENT = (
    "The bar for the second category is too short and one label is misspelled.\n"
    "1. Extend the second bar so its length matches its value.\n"
    "2. Correct the spelling of the second category label.\n"
    "VERDICT: NEEDS_REFINEMENT"
)


def _fenced(payload: dict[str, object]) -> str:
    return "Audit complete.\n```json\n" + json.dumps(payload) + "\n```"


_MOCK_JUDGE_RULES = (
    MockRule(
        contains="Dimension: DA",
        replies=(_fenced({"total_points": 10, "errors": ["value of bar 3 unreadable"]}),),
    ),
    MockRule(contains="Dimension: TR", replies=(_fenced({"total_chars": 200, "error_chars": 6}),)),
    MockRule(contains="Dimension: RR", replies=(_fenced({"total_points": 10, "violations": []}),)),
    MockRule(
        contains="Dimension: AA",
        replies=(
            _fenced(
                {
                    "label_error_pct": 0.1,
                    "total_points": 10,
                    "misaligned_points": 1,
                    "inappropriate_mark_pct": None,
                }
            ),
        ),
    ),
    MockRule(
        contains="Task: compare-to-initial",
        replies=("Most errors were fixed.\nBETTER", "A new error appeared.\nWORSE"),
    ),
    MockRule(contains="Task: pairwise-vote", replies=("FIRST", "SECOND", "FIRST", "TIE")),
    MockRule(contains="Task: screen", replies=("YES",)),
    MockRule(contains="Task: approve", replies=("YES",)),
    MockRule(contains="Task: describe", replies=(_MOCK_REWRITE.split("\n", 1)[1],)),
    MockRule(
        contains="Task: rationale",
        replies=("Sorted bars make the comparison immediate; labels carry exact values.",),
    ),
)
