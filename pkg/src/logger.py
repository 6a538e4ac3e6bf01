# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Package logger.

Modules log through ``from src.logger import logger``; the CLI calls
``configure_logging`` once with the requested verbosity.
"""

import logging
import sys

from src.config import ENABLE_DEBUG_LOGS, LOGGER_NAME

logger = logging.getLogger(LOGGER_NAME)
logger.addHandler(logging.NullHandler())

_FORMAT = "%(asctime)s %(levelname)-7s %(name)s.%(module)s: %(message)s"


def configure_logging(verbosity: int = 0) -> logging.Logger:
    """
    Attach a stderr handler and set the level from a -v count.

    0 -> WARNING, 1 -> INFO, 2+ -> DEBUG. ENABLE_DEBUG_LOGS forces DEBUG.
    """
    if ENABLE_DEBUG_LOGS or verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING

    for handler in list(logger.handlers):
        if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.NullHandler):
            logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(level)
    return logger
