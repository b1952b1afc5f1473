"""Application configuration using pydantic-settings."""

from functools import lru_cache
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables (prefix ``TOPA_``)."""

    model_config = SettingsConfigDict(
        env_prefix="TOPA_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    # Optimizer defaults
    default_varphi: float = 10.0
    default_lambda: float = 1.0
    default_eps: float = 1e-6
    default_max_iter_stage1: int = 200
    default_iters_online: int = 1

    # Synthetic generator
    burn_in: int = 50

    # Monte-Carlo benchmark
    bench_workers: int = 4


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
