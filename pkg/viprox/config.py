from functools import lru_cache
from typing import Literal

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Application
    APP_NAME: str = "viprox"

    # --- Logging ---
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: Literal["text", "json"] = "text"

    # --- Harness ---
    VIPROX_OUTPUT_DIR: str = "runs"
    VIPROX_WORKERS: int = 1

    # --- Solver trace ---
    CHECKPOINT_DENSE: int = 100          # every iterate up to here is kept
    CHECKPOINTS_PER_DECADE: int = 40     # log-spaced afterwards
    DIVERGENCE_NORM: float = 1e8

    # --- Restricted gap estimator ---
    GAP_SAMPLE_BUDGET: int = 4096
    GAP_REFINE_STARTS: int = 10
    GAP_REFINE_STEPS: int = 50

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    @field_validator("VIPROX_WORKERS", "CHECKPOINT_DENSE", "CHECKPOINTS_PER_DECADE", "GAP_SAMPLE_BUDGET")
    @classmethod
    def positive_int(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def upper_level(cls, v: str) -> str:
        return (v or "INFO").upper()


@lru_cache()
def get_settings() -> Settings:
    return Settings()


# Global settings instance
settings = get_settings()
