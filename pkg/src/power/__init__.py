"""Resource power models: log-law conversion, its inverse and DVFS rate ceilings."""

from .model import (
    CPU_MODEL,
    GPU_MODEL,
    DvfsState,
    ResourcePowerModel,
    compute_rate,
    power_for_rate,
    rate_at_dvfs,
)

__all__ = [
    "CPU_MODEL",
    "GPU_MODEL",
    "DvfsState",
    "ResourcePowerModel",
    "compute_rate",
    "power_for_rate",
    "rate_at_dvfs",
]
