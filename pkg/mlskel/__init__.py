"""Multilevel local-separator curve skeletonization."""

import logging
import os

__version__ = "1.0.0"

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def configure_logging(level: str | int | None = None) -> None:
    """Configure root logging once; the level falls back to MLSKEL_LOG_LEVEL, then INFO."""
    level = level or os.getenv("MLSKEL_LOG_LEVEL", "INFO")
    if isinstance(level, str):
        level = level.upper()
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)
