"""
MOTOR Base Component

This module provides the base class that all stateful MOTOR components inherit from.
It handles the common logging helpers so that every stage reports in the same format.
"""
import logging

ROOT_LOGGER_NAME = "motor"


class MotorComponent:
    """
    Base class for MOTOR pipeline components.

    Subclasses set ``_log_tag`` to the label used as the message prefix; log records
    go to the ``motor.<tag>`` logger so that verbosity is controlled in one place.
    """

    _log_tag: str = "MOTOR"

    @property
    def logger(self) -> logging.Logger:
        """Logger for this component."""
        return logging.getLogger(f"{ROOT_LOGGER_NAME}.{self._log_tag.lower()}")

    def _log_info(self, message: str) -> None:
        """Log an informational message."""
        self.logger.info(f"[{self._log_tag}] {message}")

    def _log_warning(self, message: str) -> None:
        """Log a warning message."""
        self.logger.warning(f"[{self._log_tag}] Warning: {message}")

    def _log_error(self, message: str) -> None:
        """Log an error message."""
        self.logger.error(f"[{self._log_tag}] Error: {message}")

    def _log_note(self, message: str) -> None:
        """Log a note message."""
        self.logger.debug(f"[{self._log_tag}] Note: {message}")
