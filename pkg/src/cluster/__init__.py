"""Cluster topology, node state and power-cap schedules."""

from .platform import (
    CapEntry,
    Node,
    NodeState,
    PlatformConfig,
    PowerCapSchedule,
    cap_at,
    fits_under_cap,
    make_cap_schedule,
    platform_power,
)

__all__ = [
    "CapEntry",
    "Node",
    "NodeState",
    "PlatformConfig",
    "PowerCapSchedule",
    "cap_at",
    "fits_under_cap",
    "make_cap_schedule",
    "platform_power",
]
