"""Runtime settings for compute-market.

Settings come from explicit constructor arguments and an optional
``compute-market.yml`` file in the working directory. Environment
variables are never read.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Annotated

from pydantic import Field, field_validator
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    YamlConfigSettingsSource,
)

from compute_market.exceptions import ConfigurationError

SETTINGS_FILE = "compute-market.yml"

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class MarketSettings(BaseSettings):
    """Application settings.

    Priority (highest to lowest):
      1. Explicit constructor arguments
      2. ``compute-market.yml`` in the current directory
      3. Field defaults
    """

    model_config = SettingsConfigDict(
        yaml_file=SETTINGS_FILE,
        yaml_file_encoding="utf-8",
        extra="ignore",
    )

    log_level: Annotated[str, Field(description="Root log level for the CLI")] = "WARNING"

    sweep_workers: Annotated[
        int, Field(ge=1, description="Worker processes used by sweep (1 = sequential)")
    ] = 1

    csv_precision: Annotated[
        int, Field(ge=1, le=17, description="Significant digits for floats in CSV output")
    ] = 17

    display_precision: Annotated[
        int, Field(ge=1, le=17, description="Significant digits for floats in human output")
    ] = 6

    scenario_dirs: Annotated[
        str, Field(description="Comma-separated additional scenario directories")
    ] = ""

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings, YamlConfigSettingsSource(settings_cls))

    @field_validator("log_level")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        level = v.strip().upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"log_level must be one of {', '.join(_LOG_LEVELS)}, got {v!r}")
        return level

    @property
    def log_level_number(self) -> int:
        return logging.getLevelName(self.log_level)

    @property
    def scenario_directories(self) -> list[Path]:
        dirs: list[Path] = []
        if self.scenario_dirs:
            for d in self.scenario_dirs.split(","):
                d = d.strip()
                if d:
                    dirs.append(Path(d).expanduser())
        return dirs

    def require_scenario_dirs_exist(self) -> None:
        """Raise if a configured scenario directory is missing."""
        for d in self.scenario_directories:
            if not d.is_dir():
                raise ConfigurationError(f"scenario directory does not exist: {d}")


# Singleton-ish: lazily loaded on first access
_settings: MarketSettings | None = None


def get_settings(**overrides: object) -> MarketSettings:
    """Get or create the application settings singleton."""
    global _settings
    if _settings is None or overrides:
        _settings = MarketSettings(**overrides)
    return _settings


def reset_settings() -> None:
    """Reset cached settings (useful for testing)."""
    global _settings
    _settings = None
