import os
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """Run settings loaded from environment variables (prefix PAIRENT_)."""

    model_config = SettingsConfigDict(
        env_prefix="PAIRENT_", env_file=".env", extra="ignore"
    )

    # Parallelism
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)

    # Units and reproducibility
    log_base: Literal["2", "e"] = "2"
    seed: int = 20140501

    # Ensemble experiments
    num_samples: int = Field(default=10_000, ge=0)
    k_policy: Literal["uniform", "fixed"] = "uniform"
    members: Optional[int] = Field(default=None, ge=1)

    # Convexity grid
    grid_size: int = Field(default=200, ge=100)
    grid_eps: float = Field(default=1e-6, gt=0.0, le=1e-3)

    # Convex-roof search
    restarts: int = Field(default=8, ge=1)
    iters: int = Field(default=400, ge=1)
    roof_members: Optional[int] = Field(default=None, ge=1)

    # Squeezed-state truncation
    tail_threshold: float = Field(default=1e-30, gt=0.0, le=1e-6)

    debug: bool = False
    log_level: str = "INFO"

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        return value.upper()


settings = Settings()
