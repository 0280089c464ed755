"""Environment settings (``STANCEKIT_*``)."""

from __future__ import annotations

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class StanceKitSettings(BaseSettings):
    """Process-wide knobs read from the environment.

    Attributes:
        threads: Worker cap for featurization, ablation cells and curve configurations.
        log_level: Logging level name used by the CLI.
    """

    model_config = SettingsConfigDict(env_prefix="STANCEKIT_", extra="ignore")

    threads: int = Field(default=1, ge=1)
    log_level: str = "INFO"
