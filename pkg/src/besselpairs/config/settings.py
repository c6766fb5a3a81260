# src/besselpairs/config/settings.py

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # -----------------------------
    # Concurrency
    # -----------------------------
    threads: int = Field(default=4, ge=1)  # BESSEL_THREADS

    # -----------------------------
    # Shooting (sturm)
    # -----------------------------
    shoot_eps_ratio: float = 1e-8  # inner cutoff eps = ratio * R
    shoot_tol: float = 1e-10

    # -----------------------------
    # Weights
    # -----------------------------
    weight_tol: float = 1e-6
    weight_cap_exponent: int = 40  # bisection top doubles up to 2**cap
    criterion_margin: float = 1e-3

    # -----------------------------
    # Oracle
    # -----------------------------
    oracle_grid_size: int = 4096
    oracle_log_span: float = 100.0  # r_0 = R * exp(-span)
    oracle_rel_tol: float = 1e-10

    # -----------------------------
    # Logging
    # -----------------------------
    log_level: str = "WARNING"
    log_file_enabled: bool = False
    log_file_path: str = "logs/bessel.log"

    model_config = SettingsConfigDict(
        env_prefix="BESSEL_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )


settings = Settings()
