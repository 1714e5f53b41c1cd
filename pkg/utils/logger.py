"""
Loguru setup for the toolkit.
Console output goes to stderr so command results on stdout stay clean.
"""
import sys
from pathlib import Path

from loguru import logger

from config.settings import settings

CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | "
    "<cyan>{name}</cyan> - <level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <7} | {name}:{function}:{line} | {thread.name} - {message}"


def _add_file_sink(path: Path, level: str, retention: str) -> None:
    # enqueue: training workers log from several threads
    logger.add(
        path,
        format=FILE_FORMAT,
        level=level,
        rotation=settings.log_file_max_size,
        retention=retention,
        compression="zip",
        enqueue=True,
    )


def setup_logger(service_name: str = "hine", level: str | None = None):
    """
    Replace all sinks with a stderr sink and, if enabled, rotating log files.

    Args:
        service_name: Log file stem (`<log_dir>/<service_name>.log`)
        level: Override for the configured log level

    Returns:
        The configured loguru logger

    Raises:
        ValueError: Unknown level name
    """
    level = (level or settings.log_level).strip().upper()
    logger.level(level)  # raises ValueError before the current sinks are removed

    logger.remove()
    logger.add(sys.stderr, format=CONSOLE_FORMAT, level=level, colorize=True)

    if settings.log_to_file:
        log_dir = Path(settings.log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        _add_file_sink(log_dir / f"{service_name}.log", level, "7 days")
        _add_file_sink(log_dir / f"{service_name}_errors.log", "ERROR", "30 days")

    return logger


log = setup_logger()
