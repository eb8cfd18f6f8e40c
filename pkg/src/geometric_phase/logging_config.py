"""Logging configuration for the geometric phase toolkit."""

import logging
import sys

LIBRARY_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
CLI_FORMAT = "%(message)s"
PACKAGE_LOGGER = "geometric_phase"

# Marks handlers installed here so repeated setup calls replace rather than stack them
_HANDLER_FLAG = "_geometric_phase_handler"


def _install(handler: logging.Handler, format_string: str) -> None:
    handler.setFormatter(logging.Formatter(format_string))
    setattr(handler, _HANDLER_FLAG, True)
    logging.getLogger().addHandler(handler)


def _remove_installed() -> None:
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, _HANDLER_FLAG, False):
            root.removeHandler(handler)
            handler.close()


def setup_logging(
    level: str | int = "INFO",
    format_string: str | None = None,
    log_file: str | None = None,
) -> None:
    """
    Set up logging for library use, e.g. from notebooks or batch scripts.

    Args:
        level: Logging level name (DEBUG, INFO, ...) or numeric level
        format_string: Custom format string for log messages
        log_file: Optional file path to write logs to as well
    """
    if isinstance(level, str):
        level = logging.getLevelNamesMapping()[level.upper()]
    format_string = format_string or LIBRARY_FORMAT

    _remove_installed()
    logging.getLogger().setLevel(level)
    logging.getLogger(PACKAGE_LOGGER).setLevel(level)

    # Diagnostics go to stderr; stdout carries reports and CSV
    _install(logging.StreamHandler(sys.stderr), format_string)
    if log_file:
        _install(logging.FileHandler(log_file), format_string)


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance with the given name.

    Args:
        name: Name of the logger (typically __name__)

    Returns:
        Logger instance
    """
    return logging.getLogger(name)


def setup_cli_logging(level: int = logging.WARNING) -> None:
    """Bare messages on stderr; a no-op when already configured."""
    root = logging.getLogger()
    if any(getattr(h, _HANDLER_FLAG, False) for h in root.handlers):
        return

    root.setLevel(level)
    _install(logging.StreamHandler(sys.stderr), CLI_FORMAT)
    logging.getLogger(PACKAGE_LOGGER).setLevel(level)
    logging.getLogger("asyncio").setLevel(logging.WARNING)
