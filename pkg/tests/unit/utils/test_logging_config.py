"""Tests for structured JSON logging."""

import json
import logging
from pathlib import Path

import pytest

from src.utils.logging_config import StructuredJSONFormatter, get_logger, setup_logging


def _format(record: logging.LogRecord) -> dict[str, object]:
    return json.loads(StructuredJSONFormatter().format(record))


def _record(name: str, level: int, **extra: object) -> logging.LogRecord:
    record = logging.LogRecord(name, level, __file__, 1, "Run started", None, None)
    for key, value in extra.items():
        setattr(record, key, value)
    return record


class TestStructuredJSONFormatter:
    """Field layout of each JSON line."""

    def test_service_and_component_from_logger_name(self) -> None:
        payload = _format(_record("ecosim.engine", logging.INFO))
        assert payload["service"] == "ecosim"
        assert payload["component"] == "engine"
        assert payload["level"] == "INFO"
        assert payload["message"] == "Run started"

    @pytest.mark.parametrize(
        "level,event_type",
        [(logging.DEBUG, "trace"), (logging.INFO, "progress"), (logging.WARNING, "anomaly")],
    )
    def test_default_event_type(self, level: int, event_type: str) -> None:
        assert _format(_record("ecosim.sweep", level))["event_type"] == event_type

    def test_explicit_event_type_and_context(self) -> None:
        payload = _format(
            _record("ecosim.engine", logging.INFO, event_type="run_start", context={"horizon_s": 600})
        )
        assert payload["event_type"] == "run_start"
        assert payload["context"] == {"horizon_s": 600}

    def test_error_details(self) -> None:
        error = {"code": "E_RUN_FAILED"}
        assert _format(_record("ecosim.sweep", logging.ERROR, error=error))["error"] == error


class TestSetupLogging:
    """Handler installation."""

    def test_file_logging(self, tmp_path: Path) -> None:
        log_file = tmp_path / "logs" / "run.log"
        setup_logging("DEBUG", log_file=log_file, enable_file_logging=True)
        try:
            get_logger("ecosim.test").info("hello")
            for handler in logging.getLogger().handlers:
                handler.flush()
            line = json.loads(log_file.read_text().splitlines()[-1])
            assert line["message"] == "hello"
            assert line["component"] == "test"
        finally:
            setup_logging("WARNING")
