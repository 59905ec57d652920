"""
Runtime settings for the SIoT sharing simulator
Logging and worker defaults only; experiment parameters live in SimulationConfig
"""

import os
from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict

# Find .env file at project root
project_root = Path(__file__).resolve().parents[2]
env_file = project_root / ".env"


class Settings(BaseSettings):
    """Application settings loaded from SIOT_* environment variables"""

    model_config = SettingsConfigDict(
        env_prefix="SIOT_",
        env_file=str(env_file),
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    app_env: str = "development"
    log_level: str = "INFO"
    log_dir: str = "./logs"

    # 0 means "use every available CPU"
    max_workers: int = 0

    def effective_workers(self, requested: Optional[int] = None) -> int:
        """Worker count for batch runs: explicit request, else setting, else CPU count"""
        workers = requested if requested is not None else self.max_workers
        if workers is None or workers < 1:
            workers = os.cpu_count() or 1
        return workers


# Create settings instance
settings = Settings()
