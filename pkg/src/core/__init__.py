from core.errors import (
    ConfigError,
    FuncMechError,
    InvariantError,
    NumericalError,
    OutputError,
)
from core.settings import settings

__all__ = [
    "settings",
    "FuncMechError",
    "ConfigError",
    "InvariantError",
    "NumericalError",
    "OutputError",
]
