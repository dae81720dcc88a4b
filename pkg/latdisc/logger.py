"""Logging configuration for latdisc.

This module sets up logging for the application with appropriate handlers and formatters.
"""

import logging
from pathlib import Path
from logging.handlers import RotatingFileHandler
from .config import config

# Create logs directory if it doesn't exist
logs_dir = Path(config.get("log_dir") or Path(__file__).parent.parent / "logs")
logs_dir.mkdir(parents=True, exist_ok=True)

# Configure logging
log_level = getattr(logging, str(config.get("log_level", "INFO")).upper(), logging.INFO)
log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
date_format = "%Y-%m-%d %H:%M:%S"

formatter = logging.Formatter(log_format, date_format)

console_handler = logging.StreamHandler()
console_handler.setFormatter(formatter)

# Rotating file handler (10MB max, keep 5 backup files)
file_handler = RotatingFileHandler(
    logs_dir / "latdisc.log",
    maxBytes=10485760,  # 10MB
    backupCount=5
)
file_handler.setFormatter(formatter)

_configured = set()


def get_logger(name: str) -> logging.Logger:
    """Get a configured logger.

    Args:
        name: Name of the logger, typically the module name

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(log_level)

    if not logger.handlers:
        logger.addHandler(console_handler)
        logger.addHandler(file_handler)

    # Prevent log propagation to avoid duplicate logs
    logger.propagate = False
    _configured.add(name)

    return logger


def set_level(level: str) -> None:
    """Reset the level of every logger handed out by get_logger."""
    value = getattr(logging, level.upper())
    console_handler.setLevel(value)
    file_handler.setLevel(value)
    for name in _configured:
        logging.getLogger(name).setLevel(value)
