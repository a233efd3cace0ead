"""Scheduler factory."""

from src.schedulers.actions import SchedulerKind
from src.schedulers.base import BaseScheduler
from src.schedulers.eco_mode import EcoModeScheduler
from src.schedulers.killer import KillerScheduler

_SCHEDULERS: dict[SchedulerKind, type[BaseScheduler]] = {
    SchedulerKind.KILLER: KillerScheduler,
    SchedulerKind.ECO_MODE: EcoModeScheduler,
}


def create_scheduler(kind: SchedulerKind | str) -> BaseScheduler:
    """Create a scheduler by kind ("killer" or "eco").

    Raises:
        ValueError: If the kind is unknown
    """
    try:
        return _SCHEDULERS[SchedulerKind(kind)]()
    except ValueError as e:
        valid = ", ".join(k.value for k in SchedulerKind)
        raise ValueError(f"unknown scheduler {kind!r}, expected one of: {valid}") from e
