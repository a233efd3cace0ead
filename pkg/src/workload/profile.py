"""Compute profiles and jobs.

A compute profile is the amount of compute each resource of each node must process in
consecutive 20 s windows. At full speed one window takes exactly 20 s of wall time.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Final

import numpy as np
import numpy.typing as npt

from src.cluster.platform import PlatformConfig
from src.domain.errors import (
    E_INVALID_JOB_TRANSITION,
    E_INVALID_PROFILE,
    SimulationInvariantError,
    WorkloadError,
)

FloatArray = npt.NDArray[np.float64]

WINDOW_SECONDS: Final = 20.0
# Relative slack when checking an amount against the full-speed window capacity.
CAPACITY_TOLERANCE: Final = 1e-9


@dataclass(frozen=True, slots=True, eq=False)
class ComputeProfile:
    """Per-node, per-resource compute amounts over fixed windows.

    Attributes:
        cpu: Array of shape (nodes, windows), CPU compute units per window
        gpu: Array of shape (nodes, 4, windows), GPU compute units per window
        window: Window length in seconds (20)
    """

    cpu: FloatArray
    gpu: FloatArray
    window: float = WINDOW_SECONDS

    def __post_init__(self) -> None:
        if self.cpu.ndim != 2 or self.gpu.ndim != 3:
            raise WorkloadError(
                f"profile arrays must be (nodes, windows) and (nodes, gpus, windows), "
                f"got {self.cpu.shape} and {self.gpu.shape}",
                E_INVALID_PROFILE,
            )
        if self.cpu.shape[0] != self.gpu.shape[0] or self.cpu.shape[1] != self.gpu.shape[2]:
            raise WorkloadError(
                f"CPU and GPU streams disagree: {self.cpu.shape} vs {self.gpu.shape}",
                E_INVALID_PROFILE,
            )
        if self.cpu.shape[1] < 1:
            raise WorkloadError("profile needs at least one window", E_INVALID_PROFILE)
        if bool(np.any(self.cpu < 0.0)) or bool(np.any(self.gpu < 0.0)):
            raise WorkloadError("compute amounts must be >= 0", E_INVALID_PROFILE)

    @property
    def node_count(self) -> int:
        return int(self.cpu.shape[0])

    @property
    def windows(self) -> int:
        return int(self.cpu.shape[1])

    @property
    def full_speed_runtime(self) -> float:
        """Wall time at full speed: windows * 20 s."""
        return self.windows * self.window

    def gpu_streams(self) -> FloatArray:
        """GPU amounts flattened to (nodes * gpus, windows)."""
        streams: FloatArray = self.gpu.reshape(-1, self.windows)
        return streams

    def total(self) -> float:
        """Total compute over all streams and windows."""
        return float(self.cpu.sum() + self.gpu.sum())

    def check_feasible(self, platform: PlatformConfig) -> None:
        """Verify every amount fits in one window at full speed.

        Raises:
            WorkloadError: If an amount exceeds rate_at_p_max * window (error code: E_INVALID_PROFILE)
        """
        cpu_cap = platform.cpu_model.max_rate * self.window * (1.0 + CAPACITY_TOLERANCE)
        gpu_cap = platform.gpu_model.max_rate * self.window * (1.0 + CAPACITY_TOLERANCE)
        if bool(np.any(self.cpu > cpu_cap)) or bool(np.any(self.gpu > gpu_cap)):
            raise WorkloadError(
                "compute amount exceeds full-speed window capacity", E_INVALID_PROFILE
            )


class JobStatus(str, Enum):
    """Lifecycle states of a job."""

    QUEUED = "queued"
    RUNNING = "running"
    COMPLETED = "completed"
    KILLED = "killed"


_ALLOWED: Final = {
    JobStatus.QUEUED: {JobStatus.RUNNING},
    JobStatus.RUNNING: {JobStatus.COMPLETED, JobStatus.KILLED},
    JobStatus.COMPLETED: set(),
    JobStatus.KILLED: set(),
}


@dataclass(slots=True, eq=False)
class Job:
    """A submitted job and its lifecycle.

    Attributes:
        id: Unique index
        submit_time: Submission time in seconds
        node_count: Whole nodes required
        eco: Whether the submitter accepts slowed execution
        profile: Compute profile
        status: queued -> running -> completed | killed
        start_time: Start time once running
        end_time: Finish or kill time
    """

    id: int
    submit_time: float
    node_count: int
    eco: bool
    profile: ComputeProfile
    status: JobStatus = JobStatus.QUEUED
    start_time: float | None = None
    end_time: float | None = None
    node_ids: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.node_count < 1 or self.node_count != self.profile.node_count:
            raise WorkloadError(
                f"job {self.id}: node_count {self.node_count} does not match profile "
                f"({self.profile.node_count} nodes)",
                E_INVALID_PROFILE,
            )

    def _transition(self, target: JobStatus) -> None:
        if target not in _ALLOWED[self.status]:
            raise SimulationInvariantError(
                f"job {self.id}: illegal transition {self.status.value} -> {target.value}",
                E_INVALID_JOB_TRANSITION,
                state_dump={"job_id": self.id, "status": self.status.value},
            )
        self.status = target

    def start(self, t: float, node_ids: tuple[int, ...]) -> None:
        self._transition(JobStatus.RUNNING)
        self.start_time = t
        self.node_ids = node_ids

    def complete(self, t: float) -> None:
        self._transition(JobStatus.COMPLETED)
        self.end_time = t

    def kill(self, t: float) -> None:
        self._transition(JobStatus.KILLED)
        self.end_time = t
