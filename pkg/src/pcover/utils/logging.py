"""Logger setup shared by the command line and the library."""

from __future__ import annotations

import logging
import os

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def get_logger(name: str) -> logging.Logger:
    logger = logging.getLogger(name)
    if not logging.getLogger().handlers:
        level = os.getenv("PCOVER_LOG_LEVEL", "WARNING").upper()
        logging.basicConfig(level=getattr(logging, level, logging.WARNING), format=LOG_FORMAT)
    return logger


def set_verbose(verbose: bool) -> None:
    """Raise the package log level to INFO for --verbose runs."""
    if verbose:
        logging.getLogger("pcover").setLevel(logging.INFO)
