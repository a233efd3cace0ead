"""Fixtures for end-to-end tests."""

from pathlib import Path

import pytest

from tests.builders import write_config


@pytest.fixture
def config_path(tmp_path: Path) -> Path:
    return write_config(tmp_path)
