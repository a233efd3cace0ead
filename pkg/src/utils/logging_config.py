"""Logging configuration with structured JSON logging."""

import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from pythonjsonlogger import jsonlogger

UTC = timezone.utc

SERVICE_NAME = "ecosim"


class StructuredJSONFormatter(jsonlogger.JsonFormatter):  # type: ignore[misc, name-defined]
    """JSON formatter emitting timestamp, level, service, component, event_type and context."""

    def add_fields(
        self,
        log_record: dict[str, Any],
        record: logging.LogRecord,
        message_dict: dict[str, Any],
    ) -> None:
        super().add_fields(log_record, record, message_dict)

        log_record["timestamp"] = datetime.now(UTC).isoformat()
        log_record["level"] = record.levelname
        log_record["message"] = record.getMessage()

        # Logger names are "service.component"
        logger_parts = record.name.split(".")
        log_record["service"] = logger_parts[0] if logger_parts else SERVICE_NAME
        log_record["component"] = logger_parts[1] if len(logger_parts) > 1 else logger_parts[0]

        log_record["event_type"] = getattr(
            record, "event_type", self._default_event_type(record.levelname)
        )

        if hasattr(record, "context"):
            log_record["context"] = record.context

        if record.levelno >= logging.ERROR and hasattr(record, "error"):
            log_record["error"] = record.error

    @staticmethod
    def _default_event_type(level: str) -> str:
        mapping = {
            "DEBUG": "trace",
            "INFO": "progress",
            "WARNING": "anomaly",
            "ERROR": "error",
            "CRITICAL": "error",
        }
        return mapping.get(level, "progress")


def setup_logging(
    log_level: str = "INFO",
    log_file: Path | None = None,
    enable_file_logging: bool = False,
) -> None:
    """
    Set up structured JSON logging.

    The console handler writes to stderr so run artifacts written to stdout stay clean.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Path to log file (default: logs/ecosim-{date}.log)
        enable_file_logging: Whether to also log to a JSONL file
    """
    level = getattr(logging, log_level.upper())

    if enable_file_logging and log_file is None:
        log_dir = Path("logs")
        log_dir.mkdir(exist_ok=True)
        date_str = datetime.now(UTC).strftime("%Y-%m-%d")
        log_file = log_dir / f"{SERVICE_NAME}-{date_str}.log"

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(StructuredJSONFormatter())
    root_logger.addHandler(console_handler)

    if enable_file_logging and log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        file_handler.setFormatter(StructuredJSONFormatter())
        root_logger.addHandler(file_handler)


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance with structured logging support.

    Args:
        name: Logger name in "service.component" form, e.g. "ecosim.engine"

    Returns:
        Logger instance
    """
    return logging.getLogger(name)
