"""Application settings.

Examples:
    ```python
    from tablevis_tools.core.settings import current_settings

    settings = current_settings()
    if settings.live:
        ...  # live endpoints may be used
    ```

"""
#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.

from __future__ import annotations

from pathlib import Path

from pydantic import AliasChoices, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from tablevis_tools.core import consts


class Settings(BaseSettings):
    """Process level settings read from `TABLEVIS_*` environment variables and the `.env` file."""

    environment: str = "local"
    """Deployment environment name."""
    log_level: str = "INFO"
    """Log level for all package loggers."""
    live: bool = Field(default=False, validation_alias=AliasChoices("SHOWTABLE_LIVE", "TABLEVIS_LIVE"))
    """Allows live smoke runs against real endpoints (`SHOWTABLE_LIVE=1` or `TABLEVIS_LIVE=1`)."""
    live_config: Path | None = None
    """Run configuration used by the live smoke tests."""
    templates_dir: Path | None = None
    """Overrides the bundled prompt template directory."""

    model_config = SettingsConfigDict(
        env_prefix="TABLEVIS_",
        env_file=consts.directories.ROOT_DIR / ".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        extra="ignore",
    )


def current_settings() -> Settings:
    """Instantiate current application settings.

    Returns:
        Current application settings.

    """
    return Settings()
