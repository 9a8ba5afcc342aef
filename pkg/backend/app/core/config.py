from typing import Optional
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Logging configuration
    log_level: str = "INFO"

    # Decision procedures
    overlap_radius: int = 0
    threads: int = 1

    # Splitting complex
    dim_cap: int = 5

    # Oracle configuration
    oracle_extra_len: int = 4
    oracle_max_len_limit: int = 12
    oracle_samples: int = 25
    seed: int = 0

    # Input limits
    word_length_limit: int = 64

    # Application metadata
    app_name: str = "spheres"
    app_version: str = "1.0.0"

    model_config = SettingsConfigDict(
        env_prefix="SPHERES_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        """Validate log level is one of the standard levels."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v_upper = v.upper()
        if v_upper not in valid_levels:
            raise ValueError(f"LOG_LEVEL must be one of: {', '.join(valid_levels)}")
        return v_upper

    @field_validator("overlap_radius", "oracle_extra_len")
    @classmethod
    def validate_non_negative(cls, v):
        if v < 0:
            raise ValueError("must be >= 0")
        return v

    @field_validator("threads", "dim_cap", "oracle_max_len_limit", "oracle_samples", "word_length_limit")
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("must be >= 1")
        return v


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Get application settings singleton.

    Returns:
        Settings: Application configuration settings
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reload_settings() -> Settings:
    """
    Force reload of settings from environment.

    Returns:
        Settings: Refreshed application configuration settings
    """
    global _settings
    _settings = Settings()
    return _settings
