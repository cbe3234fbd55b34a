"""
Logging
"""

# pyright: basic

import logging
import sys
from contextvars import ContextVar

from loguru import logger

from app.core.config import settings
from app.schema.log_entry import LogEntry

__all__ = (
    "configure_logging",
    "log_serializer",
    "logger",
    "run_id",
    "sink",
)

run_id: ContextVar[str] = ContextVar("run_id", default="")


class InterceptHandler(logging.Handler):
    def emit(self, record):
        # Get corresponding Loguru level
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # Find caller to get correct stack depth
        frame, depth = logging.currentframe(), 2
        while frame.f_back and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def log_serializer(record) -> str:
    """
    Custom log serializer for loguru
    """

    message = record["message"]
    if len(message) > settings.LOG_MESSAGE_MAX_LEN:
        message = message[: settings.LOG_MESSAGE_MAX_LEN - 3] + "..."

    log_entry = LogEntry(
        asctime=record["time"],
        levelname=record["level"].name,
        run_id=run_id.get(),
        module=record["name"] or "",
        message=message,
    )

    return log_entry.model_dump_json()


def sink(message) -> None:
    """
    Custom sink for loguru. Standard output is reserved for command results.
    """
    print(log_serializer(message.record), file=sys.stderr)


def configure_logging(level: str | None = None) -> None:
    """(Re)install the JSON sink at the requested level."""
    logger.remove()
    logger.add(
        sink,
        level=level or ("DEBUG" if settings.DEBUG else settings.LOG_LEVEL),
    )


configure_logging()

logging.basicConfig(handlers=[InterceptHandler()], level=logging.INFO)
