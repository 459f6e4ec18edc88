from pathlib import Path
from typing import Annotated

from dotenv import find_dotenv
from pydantic import BeforeValidator, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


def check_log_level(x: str) -> str:
    level = str(x).upper()
    if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
        raise ValueError(f"Unknown log level: {x}")
    return level


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=find_dotenv(),
        env_file_encoding="utf-8",
        env_ignore_empty=True,
        extra="ignore",
        validate_default=False,
    )
    MODE: str | None = "dev"

    LOG_LEVEL: Annotated[str, BeforeValidator(check_log_level)] = "INFO"
    OUTPUT_DIR: Path = Path("runs")
    DEFAULT_SEED: int = 20240101

    # Potentials above this degree are rejected when a Potential is built.
    MAX_POTENTIAL_DEGREE: int = Field(default=6, ge=0)
    # Half-width of the default grid domain in units of the Gaussian widths a, b.
    GRID_MIN_WIDTHS: float = Field(default=6.0, gt=0)

    ENSEMBLE_SHARDS: int = Field(default=4, ge=1)
    # Particles per counter-derived random substream; fixing it keeps results
    # independent of the shard count.
    ENSEMBLE_BLOCK_SIZE: int = Field(default=8192, ge=1)

    PLOT_HASH_SALT: str = "funcmech"

    def is_dev(self) -> bool:
        return self.MODE == "dev"


settings = Settings()
