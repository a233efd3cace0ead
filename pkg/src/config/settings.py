"""Process settings from the environment (ECOSIM_*), after loading any .env file."""

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

import src.utils.env_loader  # noqa: F401  (loads .env into the environment)


class EcoSimSettings(BaseSettings):
    """Environment-level settings.

    Attributes:
        workers: Sweep worker count override (ECOSIM_WORKERS)
        log_level: Logging level (ECOSIM_LOG_LEVEL)
        log_file: Enables JSONL file logging to this path (ECOSIM_LOG_FILE)
    """

    workers: int | None = Field(default=None, ge=1)
    log_level: str = "INFO"
    log_file: Path | None = None

    model_config = SettingsConfigDict(env_prefix="ECOSIM_", extra="ignore")


def get_settings() -> EcoSimSettings:
    return EcoSimSettings()
