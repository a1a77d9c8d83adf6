"""
Configuration management for qadd
"""

from typing import Any

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", case_sensitive=True, extra="ignore"
    )

    # General
    PROJECT_NAME: str = "qadd"
    ENVIRONMENT: str = "development"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FILE: str | None = None

    # Numerics
    ZERO_CUTOFF: float = 1e-12
    HERMITIAN_TOL: float = 1e-10
    ISOMETRY_TOL: float = 1e-8
    CHANNEL_TOL: float = 1e-9
    CERTIFICATE_TOL: float = 1e-8
    CONDITION_LIMIT: float = 1e8
    BOUNDARY_TOL: float = 1e-6
    REGION_BAND: float = 0.02

    # Optimization
    MULTISTART_RESTARTS: int = 32
    SIMPLEX_TOL: float = 1e-9
    MAX_ITERATIONS: int = 20000
    MAX_MULTISTART_DIM: int = 16

    # Log-singularity fits
    EPSILON_MIN: float = 1e-6
    EPSILON_MAX: float = 1e-2
    EPSILON_POINTS: int = 12

    # Experiment runner
    DEFAULT_SEED: int = 0
    WORKERS: int = 1
    FLOAT_DIGITS: int = 10
    SMITH_YARD_MAX_DC: int = 9

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v: Any) -> str:
        return str(v).upper()

    @field_validator("EPSILON_POINTS")
    @classmethod
    def check_epsilon_points(cls, v: int) -> int:
        if v < 6:
            raise ValueError("EPSILON_POINTS must be at least 6")
        return v


# Global settings instance
settings = Settings()
