"""
Solver-wide settings read from MHD_ESFV_* environment variables and a local .env file.

Run-specific numerics (grid, flux, CFL) live in the run config, not here.
"""
from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings

_LOG_LEVELS = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}


class Settings(BaseSettings):
    """Process-level settings with environment variable support."""

    # Application settings
    app_name: str = "MHD-ESFV"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "INFO"

    # Output settings
    output_dir: Path = Field(
        default=Path("results"),
        description="Directory receiving CSV artifacts; overrides the run config",
    )
    reference_dir: Path = Path("reference")

    # Execution settings
    workers: int = Field(default=1, description="Threads used for interface evaluation")
    progress_every: int = 500

    @field_validator("workers", "progress_every")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Reject non-positive counts."""
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normalize and check the log level name."""
        level = v.strip().upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"log level must be one of: {', '.join(sorted(_LOG_LEVELS))}")
        return level

    @property
    def effective_log_level(self) -> str:
        """DEBUG when debug mode is on, otherwise the configured level."""
        return "DEBUG" if self.debug else self.log_level

    @property
    def output_dir_overridden(self) -> bool:
        """True when the output directory was set through the environment."""
        return "output_dir" in self.model_fields_set

    model_config = {
        "env_prefix": "MHD_ESFV_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "case_sensitive": False,
        "extra": "ignore",
    }


# Global settings instance
settings = Settings()
