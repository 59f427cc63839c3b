"""
MOTOR Process Configuration

Environment-driven settings. A ``.env`` file in the working directory is loaded
first; everything numeric lives in ``RerankConfig`` and is flag-driven.
"""
import logging
import os
import sys
from typing import Optional, TypedDict

from dotenv import load_dotenv

from .base import ROOT_LOGGER_NAME

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
DEFAULT_LOG_LEVEL = "WARNING"


class MotorSettings(TypedDict, total=False):
    """Process-level settings read from the environment."""
    log_level: str  # One of LOG_LEVELS, from MOTOR_LOG


def load_motor_settings() -> MotorSettings:
    """
    Load MOTOR settings from environment variables.

    Returns:
        MotorSettings: Settings dictionary

    Raises:
        ValueError: If MOTOR_LOG names an unknown level
    """
    load_dotenv()
    level = os.environ.get("MOTOR_LOG", DEFAULT_LOG_LEVEL).strip().upper()
    if level not in LOG_LEVELS:
        raise ValueError(f"MOTOR_LOG must be one of {', '.join(LOG_LEVELS)}, got {level!r}")
    return {"log_level": level}


def configure_logging(level: Optional[str] = None) -> None:
    """Attach a handler for the current stderr to the ``motor`` logger at the given level."""
    level = (level or DEFAULT_LOG_LEVEL).upper()
    root = logging.getLogger(ROOT_LOGGER_NAME)
    root.setLevel(level)
    # the previous stderr may already be closed, so it is dropped without a flush
    for stale in [h for h in root.handlers if getattr(h, "_motor_handler", False)]:
        root.removeHandler(stale)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler._motor_handler = True  # type: ignore[attr-defined]
    root.addHandler(handler)
