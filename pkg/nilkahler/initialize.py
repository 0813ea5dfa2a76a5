"""This module defines the start-up steps run before any command."""

import logging
import sys

from nilkahler import config


def initialize(verbosity: int = 0) -> None:
    """Send log records to the error stream; each -v lowers the threshold one level."""
    level = logging.getLevelName(config.LOG_LEVEL) - 10 * verbosity
    logging.basicConfig(stream=sys.stderr, format=config.LOG_FORMAT, level=max(level, logging.DEBUG), force=True)
    logging.getLogger(__name__).debug("Initializing.")
