"""Scheduler inputs and outputs.

Schedulers never touch run state. The engine hands them a `PowerProjection` snapshot
and applies the actions they return.
"""

from collections.abc import Collection, Mapping
from dataclasses import dataclass
from enum import Enum

from src.cluster.platform import fits_under_cap


class SchedulerKind(str, Enum):
    """Scheduler variants under comparison."""

    KILLER = "killer"
    ECO_MODE = "eco"


@dataclass(frozen=True, slots=True)
class JobView:
    """What a scheduler knows about one running (or candidate) job.

    Attributes:
        job_id: Job index
        eco: Eco flag
        start_time: Start time in seconds (candidate jobs: now)
        step: Current ladder index
        power_by_step: Worst-case projected power of the job's nodes at each ladder index
    """

    job_id: int
    eco: bool
    start_time: float
    step: int
    power_by_step: tuple[float, ...]

    def power(self, step: int | None = None) -> float:
        return self.power_by_step[self.step if step is None else step]


@dataclass(frozen=True, slots=True)
class PowerProjection:
    """Snapshot of projected platform power at one instant.

    Attributes:
        cap: Cap in effect, in watts
        cap_active: Whether the cap is below the platform maximum
        base_power: Idle floor of powered idle nodes (shut-down nodes draw nothing)
        jobs: Running jobs, oldest first (start time, then id)
        max_step: Ladder index of full speed
    """

    cap: float
    cap_active: bool
    base_power: float
    jobs: tuple[JobView, ...]
    max_step: int

    def total(
        self, steps: Mapping[int, int] | None = None, excluded: Collection[int] = ()
    ) -> float:
        """Projected platform power with optional step overrides and killed jobs removed."""
        steps = steps or {}
        return self.base_power + sum(
            job.power(steps.get(job.job_id)) for job in self.jobs if job.job_id not in excluded
        )

    def fits(self, power: float) -> bool:
        return fits_under_cap(power, self.cap)


@dataclass(frozen=True, slots=True)
class SetDvfs:
    """Move a running job's nodes to a ladder index."""

    job_id: int
    step: int


@dataclass(frozen=True, slots=True)
class KillDecision:
    """Jobs to kill, in kill order.

    Attributes:
        victims: Job ids, first victim first
        deficit: Projected watts above the cap before killing
        unreachable: True when killing every running job still leaves power above the cap
    """

    victims: tuple[int, ...]
    deficit: float
    unreachable: bool = False


Action = SetDvfs | KillDecision
