"""
Configuration settings for the Atkin-Lehner twist toolkit
Loads environment variables using Pydantic Settings
"""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables

    Optional variables:
    - AP_CACHE_PATH: on-disk a_ell cache for X_0(11) and X_0(19) (default: "data/ap_cache.csv")
    - OUTPUT_DIR: directory for survey CSV/JSON outputs (default: "output")
    - RANK_TAU: absolute zero threshold for L(1) and L'(1) (default: 1e-4)
    - TRUNCATION_DIGITS: k in the truncation rule nmax = sqrt(Q)/(2 pi) * ln(10^k) (default: 10)
    - SURVEY_WORKERS: processes used for rank verdicts (default: 1)
    - LOG_LEVEL: logging level name (default: "INFO")
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",  # Ignore extra environment variables
    )

    AP_CACHE_PATH: str = "data/ap_cache.csv"
    OUTPUT_DIR: str = "output"
    RANK_TAU: float = 1e-4
    TRUNCATION_DIGITS: int = 10
    SURVEY_WORKERS: int = 1
    LOG_LEVEL: str = "INFO"

    @property
    def ap_cache_path(self) -> str:
        return self.AP_CACHE_PATH

    @property
    def output_dir(self) -> str:
        return self.OUTPUT_DIR

    @property
    def rank_tau(self) -> float:
        return self.RANK_TAU

    @property
    def truncation_digits(self) -> int:
        return self.TRUNCATION_DIGITS

    @property
    def survey_workers(self) -> int:
        return max(1, self.SURVEY_WORKERS)

    @property
    def log_level(self) -> str:
        return self.LOG_LEVEL.upper()

    # API metadata
    api_title: str = "Atkin-Lehner Twist Toolkit"
    api_version: str = "1.0.0"
    api_description: str = "Points, ranks and deficient places of prime twists C(N,p) of X_0(N)"


# Initialize settings instance (singleton)
settings = Settings()
