"""Cluster topology, node state and the stepwise power-cap schedule.

Every node is one CPU plus four GPUs. Jobs own whole nodes. A node is idle (drawing its
idle floor), running one job, or shut down (drawing nothing) after its job was killed.
"""

import bisect
import math
from collections.abc import Mapping, Sequence
from enum import Enum
from typing import Final, Literal

from pydantic import BaseModel, Field, field_validator, model_validator

from src.domain.errors import (
    E_INVALID_CAP_SCHEDULE,
    E_INVALID_DVFS_STEP,
    E_INVALID_LADDER,
    E_INVALID_PLATFORM,
    with_code,
)
from src.power.model import (
    CPU_MODEL,
    GPU_MODEL,
    DvfsState,
    ResourcePowerModel,
)

SECONDS_PER_DAY: Final = 86_400
CAP_WINDOW_START: Final = 18 * 3600
CAP_WINDOW_END: Final = 20 * 3600

# Relative slack for every "projected power <= cap" comparison.
POWER_TOLERANCE: Final = 1e-9

DEFAULT_LADDER: Final = tuple(round(0.5 + 0.05 * i, 2) for i in range(11))


def fits_under_cap(power: float, cap: float) -> bool:
    """Return True if `power` does not exceed `cap` beyond the relative tolerance."""
    return power <= cap * (1.0 + POWER_TOLERANCE) + POWER_TOLERANCE


class PlatformConfig(BaseModel):
    """Cluster topology and power-model parameters.

    Attributes:
        node_count: Number of nodes (>= 1)
        cpus_per_node: Always 1
        gpus_per_node: Always 4
        cpu_model: CPU power model
        gpu_model: GPU power model
        dvfs_ladder: Ascending power fractions, min >= 0.5, max = 1.0
        reboot_delay: Seconds a killed job's nodes stay down after the cap window ends
    """

    node_count: int = Field(default=8, description="Number of nodes")
    cpus_per_node: Literal[1] = 1
    gpus_per_node: Literal[4] = 4
    cpu_model: ResourcePowerModel = Field(default=CPU_MODEL)
    gpu_model: ResourcePowerModel = Field(default=GPU_MODEL)
    dvfs_ladder: tuple[float, ...] = Field(default=DEFAULT_LADDER)
    reboot_delay: float = Field(default=0.0, description="Reboot delay in seconds")

    model_config = {"frozen": True}

    @field_validator("node_count")
    @classmethod
    def validate_node_count(cls, v: int) -> int:
        if v < 1:
            raise ValueError(with_code(f"node_count must be >= 1, got {v}", E_INVALID_PLATFORM))
        return v

    @field_validator("reboot_delay")
    @classmethod
    def validate_reboot_delay(cls, v: float) -> float:
        if not (math.isfinite(v) and v >= 0.0):
            raise ValueError(
                with_code(f"reboot_delay must be finite and >= 0, got {v}", E_INVALID_PLATFORM)
            )
        return v

    @field_validator("dvfs_ladder")
    @classmethod
    def validate_ladder(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        """Ladder must be strictly ascending with min >= 0.5 and max = 1.0."""
        if not v:
            raise ValueError(with_code("dvfs_ladder must not be empty", E_INVALID_LADDER))
        if any(b <= a for a, b in zip(v, v[1:], strict=False)):
            raise ValueError(with_code("dvfs_ladder must be strictly ascending", E_INVALID_LADDER))
        if v[0] < 0.5 or v[-1] != 1.0:
            raise ValueError(
                with_code(
                    f"dvfs_ladder must span [>=0.5, 1.0], got [{v[0]}, {v[-1]}]", E_INVALID_LADDER
                )
            )
        return v

    @model_validator(mode="after")
    def validate_ladder_rates(self) -> "PlatformConfig":
        """Every ladder point must leave both resource types a positive compute rate."""
        lowest = self.dvfs_ladder[0]
        for name, model in (("cpu", self.cpu_model), ("gpu", self.gpu_model)):
            if not lowest * model.p_max > model.p_idle:
                raise ValueError(
                    with_code(
                        f"ladder minimum {lowest} leaves {name} at or below idle power",
                        E_INVALID_LADDER,
                    )
                )
        return self

    @property
    def node_max_power(self) -> float:
        """Power of one node at full load, in watts."""
        return self.cpu_model.p_max + self.gpus_per_node * self.gpu_model.p_max

    @property
    def node_idle_power(self) -> float:
        """Power of one powered-on node with no job, in watts."""
        return self.cpu_model.p_idle + self.gpus_per_node * self.gpu_model.p_idle

    @property
    def platform_max_power(self) -> float:
        """node_count * (cpu.p_max + 4 * gpu.p_max)."""
        return self.node_count * self.node_max_power

    @property
    def max_step(self) -> int:
        """Index of the full-speed ladder point."""
        return len(self.dvfs_ladder) - 1

    def dvfs_state(self, step: int) -> DvfsState:
        """Build the DvfsState of a ladder index.

        Raises:
            ValueError: If step is outside the ladder (error code: E_INVALID_DVFS_STEP)
        """
        if not 0 <= step <= self.max_step:
            raise ValueError(with_code(f"DVFS step {step} outside ladder", E_INVALID_DVFS_STEP))
        return DvfsState(step=step, power_fraction=self.dvfs_ladder[step])

    def full_speed(self) -> DvfsState:
        """DvfsState at the top of the ladder."""
        return self.dvfs_state(self.max_step)


class NodeState(str, Enum):
    """Lifecycle of a node."""

    IDLE = "idle"
    RUNNING = "running"
    SHUT_DOWN = "shut_down"


class Node(BaseModel):
    """One node of the cluster.

    Attributes:
        id: Node index
        state: idle, running or shut_down
        job_id: Job occupying the node (running only)
        shut_until: Earliest reboot time in seconds (shut_down only, may be inf)
        dvfs: Current operating point; full speed whenever the node is idle
    """

    id: int = Field(..., ge=0)
    state: NodeState = NodeState.IDLE
    job_id: int | None = None
    shut_until: float | None = None
    dvfs: DvfsState


def platform_power(
    config: PlatformConfig, nodes: Sequence[Node], job_power: Mapping[int, float]
) -> float:
    """Instantaneous platform power in watts.

    Shut-down nodes draw 0 and idle nodes their idle floor. Running nodes are charged
    through their job: `job_power` maps each running job id to the power of all its nodes.

    Raises:
        KeyError: If a running node's job has no entry in job_power
    """
    idle = sum(1 for node in nodes if node.state is NodeState.IDLE)
    running = {node.job_id for node in nodes if node.state is NodeState.RUNNING}
    busy = math.fsum(job_power[job_id] for job_id in running if job_id is not None)
    return idle * config.node_idle_power + busy


class CapEntry(BaseModel):
    """One step of the cap schedule: from `time` on, the cap is `cap` watts."""

    time: float = Field(..., ge=0.0, description="Step time in seconds")
    cap: float = Field(..., ge=0.0, description="Cap in watts")

    model_config = {"frozen": True}


class PowerCapSchedule(BaseModel):
    """Stepwise-constant power cap over simulated time.

    Before the first entry the cap is the platform maximum. Steps are left-closed: an
    entry's cap applies at exactly its time.

    Attributes:
        entries: Steps in strictly increasing time order
        platform_max_power: Implicit initial cap in watts
    """

    entries: tuple[CapEntry, ...] = Field(default=())
    platform_max_power: float = Field(..., gt=0.0)

    model_config = {"frozen": True}

    @field_validator("entries")
    @classmethod
    def validate_times(cls, v: tuple[CapEntry, ...]) -> tuple[CapEntry, ...]:
        """Entry times must be strictly increasing."""
        if any(b.time <= a.time for a, b in zip(v, v[1:], strict=False)):
            raise ValueError(
                with_code("cap entry times must be strictly increasing", E_INVALID_CAP_SCHEDULE)
            )
        return v

    def cap_at(self, t: float) -> float:
        """Cap in effect at time t (last entry with time <= t)."""
        times = [e.time for e in self.entries]
        idx = bisect.bisect_right(times, t) - 1
        if idx < 0:
            return self.platform_max_power
        return self.entries[idx].cap

    def is_active(self, cap: float) -> bool:
        """A cap binds when it is below the platform maximum."""
        return cap < self.platform_max_power * (1.0 - POWER_TOLERANCE)

    def release_time(self, t: float) -> float:
        """First entry strictly after t that lifts the cap to the maximum (inf if none)."""
        for entry in self.entries:
            if entry.time > t and not self.is_active(entry.cap):
                return entry.time
        return math.inf


def cap_at(schedule: PowerCapSchedule, t: float) -> float:
    """Stepwise cap lookup; the platform maximum before the first entry."""
    return schedule.cap_at(t)


def make_cap_schedule(
    days: int, cap_fraction: float, platform_max_power: float
) -> PowerCapSchedule:
    """Daily cap between 18:00 and 20:00.

    Args:
        days: Number of simulated days (>= 1)
        cap_fraction: Cap as a fraction of the platform maximum, in (0, 1]
        platform_max_power: Platform maximum in watts

    Returns:
        Schedule with two entries per day

    Raises:
        ValueError: If days < 1 or cap_fraction outside (0, 1] (error code: E_INVALID_CAP_SCHEDULE)
    """
    if days < 1 or not 0.0 < cap_fraction <= 1.0:
        raise ValueError(
            with_code(
                f"need days >= 1 and 0 < cap_fraction <= 1, got {days}, {cap_fraction}",
                E_INVALID_CAP_SCHEDULE,
            )
        )
    entries: list[CapEntry] = []
    for day in range(days):
        base = day * SECONDS_PER_DAY
        entries.append(CapEntry(time=base + CAP_WINDOW_START, cap=cap_fraction * platform_max_power))
        entries.append(CapEntry(time=base + CAP_WINDOW_END, cap=platform_max_power))
    return PowerCapSchedule(entries=tuple(entries), platform_max_power=platform_max_power)
