import logging
from typing import Optional

from scatpoles.environment import logging_level_from_env

LOG_FORMAT = "%(asctime)s.%(msecs)03d | %(levelname)s | %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"

console_logger = logging.getLogger("scatpoles")


def setup_console_logging(level: Optional[str] = None) -> logging.Logger:
    """Console handler on the package logger; level from LOGGING_LEVEL unless given."""
    console_logger.setLevel(level or logging_level_from_env())
    if not console_logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATEFMT))
        console_logger.addHandler(handler)
    return console_logger
