"""Run configuration, sweep grid and environment settings."""

from .loader import load_run_config
from .run_config import CapSection, OutputSection, RunConfig, SweepSpec, WorkloadSection
from .settings import EcoSimSettings, get_settings

__all__ = [
    "CapSection",
    "EcoSimSettings",
    "OutputSection",
    "RunConfig",
    "SweepSpec",
    "WorkloadSection",
    "get_settings",
    "load_run_config",
]
