"""pytest fixtures and configuration.

This file centralizes test-suite behavior that should apply consistently across
unit and integration tests.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from src.cluster.platform import PlatformConfig


def pytest_configure(config: pytest.Config) -> None:
    """Register the test markers."""
    config.addinivalue_line(
        "markers",
        "integration: marks tests as integration tests (deselect with '-m \"not integration\"')",
    )
    config.addinivalue_line(
        "markers",
        "unit: marks tests as unit tests (deselect with '-m \"not unit\"')",
    )
    config.addinivalue_line(
        "markers",
        "slow: marks long-running simulation tests (deselect with '-m \"not slow\"')",
    )


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    """Auto-mark tests based on their directory."""
    for item in items:
        path_str = Path(str(item.fspath)).as_posix()
        if "/tests/integration/" in path_str:
            item.add_marker(pytest.mark.integration)
        elif "/tests/unit/" in path_str:
            item.add_marker(pytest.mark.unit)


@pytest.fixture
def platform() -> PlatformConfig:
    """The default 8-node platform."""
    return PlatformConfig()
