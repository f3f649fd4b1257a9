from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

# Relative margin below the smallest outer-hull distance for an interior flag
DEFAULT_HULL_TOL = 1e-7


class Settings(BaseSettings):
    """Application configuration settings"""

    model_config = SettingsConfigDict(
        extra="ignore",
        env_prefix="READOUT_LAB_",
        env_file=".env",
        env_file_encoding="utf-8",
    )

    # Output Configuration
    out: Path = Path("runs")
    jobs: int = 1

    # Readout Configuration
    ridge_lambda: float = 10.0
    n_bins: int = 15

    # Randomized SVD Configuration
    svd_power_iters: int = 2
    svd_oversample: int = 8

    # Hull Solver Configuration
    hull_max_iters: int = 10_000
    hull_tol: float = DEFAULT_HULL_TOL

    # Application Configuration
    log_level: str = "INFO"


# Global settings instance
settings = Settings()
