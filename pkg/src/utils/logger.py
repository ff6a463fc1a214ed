"""Logger utilities. Log records go to stderr; stdout carries results only."""

import logging
import sys
from typing import Dict, Optional

from ..config import Config

_LOGGERS: Dict[str, logging.Logger] = {}


def setup_logger(name: str, level: Optional[int] = None) -> logging.Logger:
    """Library logger with a single stderr handler."""
    logger = logging.getLogger(name)
    logger.setLevel(Config.LOG_LEVEL if level is None else level)
    logger.propagate = False

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        ))
        logger.addHandler(handler)

    _LOGGERS[name] = logger
    return logger


def set_log_level(level: int) -> None:
    """Apply ``level`` to every logger created through setup_logger."""
    for logger in _LOGGERS.values():
        logger.setLevel(level)
