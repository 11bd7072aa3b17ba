import logging
import os
import sys
from typing import Optional

from vcdim.core.config import settings

FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(level: Optional[str] = None, log_dir: Optional[str] = None) -> logging.Logger:
    """Attach console (and optionally file) handlers to the package logger"""
    logger = logging.getLogger("vcdim")
    logger.setLevel((level or settings.LOG_LEVEL).upper())

    # Handlers are attached once per process
    if logger.handlers:
        return logger

    formatter = logging.Formatter(FORMAT)

    ch = logging.StreamHandler(sys.stderr)
    ch.setFormatter(formatter)
    logger.addHandler(ch)

    log_dir = log_dir or settings.LOG_DIR
    if log_dir:
        try:
            os.makedirs(log_dir, exist_ok=True)
            fh = logging.FileHandler(os.path.join(log_dir, "vcdim.log"))
            fh.setFormatter(formatter)
            logger.addHandler(fh)
        except OSError as e:
            # If file logging fails, just log to console
            logger.warning(f"Could not set up file logging: {str(e)}")

    return logger
