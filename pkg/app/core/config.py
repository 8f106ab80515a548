"""Application configuration settings."""

from pydantic_settings import BaseSettings, SettingsConfigDict

from app.models.enums import LeibnizMode


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
    )

    PROJECT_NAME: str = "cartan-ho-lab"
    VERSION: str = "0.1.0"
    EXPORT_FORMAT: str = "cartan-ho-lab/1"

    # Sampled property checks
    DEFAULT_SEED: int = 20240613
    SAMPLE_PAIRS: int = 1000
    SAMPLE_TRIPLES: int = 200

    # Linear algebra - dense elimination for small, dense matrices
    DENSE_DENSITY_THRESHOLD: float = 0.25
    DENSE_MAX_CELLS: int = 250_000

    # Derivation solver
    SOLVER_WORKERS: int = 4
    LEIBNIZ_MODE: LeibnizMode = LeibnizMode.GRADED
    VERIFY_SOLUTIONS: bool = True
    VERIFY_PAIRS: int = 2000

    LOG_LEVEL: str = "WARNING"


settings = Settings()
