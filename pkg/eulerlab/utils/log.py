import os
import sys
from typing import Optional

from loguru import logger

LOG_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} - {name} - {level} - {message}"


def setup_logger(log_dir: Optional[str] = None, log_file: str = "eulerlab.log", level: Optional[str] = None):
    """
    Configure loguru sinks for a run.

    Args:
        log_dir: Directory for the file sink, None for stderr only
        log_file: File name inside log_dir
        level: Log level, defaults to EULER_LAB_LOG_LEVEL or INFO

    Returns:
        The configured loguru logger
    """
    level = (level or os.environ.get("EULER_LAB_LOG_LEVEL", "INFO")).upper()
    logger.remove()
    logger.add(sys.stderr, level=level, format=LOG_FORMAT)
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        logger.add(os.path.join(log_dir, log_file), level=level, format=LOG_FORMAT)
    return logger
