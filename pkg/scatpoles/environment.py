import os
from typing import Optional

from scatpoles.utils import raise_value_error

THREADS = "SCATPOLES_THREADS"
LOGGING_LEVEL = "LOGGING_LEVEL"


def threads_from_env() -> Optional[int]:
    """Worker count from SCATPOLES_THREADS, None when unset."""
    value = os.getenv(THREADS)
    if value is None or value.strip() == "":
        return None
    try:
        threads = int(value)
    except ValueError:
        return raise_value_error(f"{THREADS} must be an integer, got {value!r}")
    if threads < 1:
        raise_value_error(f"{THREADS} must be >= 1, got {threads}")
    return threads


def logging_level_from_env(default: str = "INFO") -> str:
    return os.getenv(LOGGING_LEVEL, default).upper()
