"""
Runtime settings loaded with pydantic-settings.
Environment variables use the HINE_ prefix and may also come from a .env file.
"""
from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix='HINE_',
        env_file='.env',
        env_file_encoding='utf-8',
        case_sensitive=False,
        extra='ignore'  # Ignore unrelated variables in a shared .env
    )

    # Logging
    log_level: str = Field('INFO', description="Console and file log level")
    log_to_file: bool = Field(False, description="Also write rotating log files")
    log_dir: str = Field('logs', description="Directory for log files")
    log_file_max_size: str = Field('100MB', description="Rotation size for log files")

    # Data
    data_dir: str = Field('.', description="Default directory for relative input paths")

    # Training runtime
    threads: int = Field(1, ge=1, description="Worker threads; 1 = deterministic mode")
    prefetch_batches: int = Field(64, ge=1, description="Bounded size of the batch prefetch queue")

    @field_validator('log_level')
    @classmethod
    def normalize_level(cls, v: str) -> str:
        """Upper-case the level name so loguru accepts it."""
        return v.strip().upper()

    @property
    def data_path(self) -> Path:
        """Data directory as a Path."""
        return Path(self.data_dir).expanduser()


# Global settings instance
settings = Settings()
