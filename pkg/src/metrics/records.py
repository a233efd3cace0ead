"""Per-job records, the energy ledger and aggregate run metrics."""

from enum import Enum

from pydantic import BaseModel, Field


class JobOutcome(str, Enum):
    """How a job left the simulation."""

    COMPLETED = "completed"
    KILLED = "killed"
    CENSORED = "censored"


class JobRecord(BaseModel):
    """Outcome of one submitted job.

    Attributes:
        job_id: Job index
        eco: Eco flag
        node_count: Nodes occupied
        submit_time: Time the job entered the queue, in seconds
        start_time: Start time (None if it never started)
        end_time: Finish or kill time (None when censored)
        full_speed_runtime: Runtime at full speed, in seconds
        actual_runtime: Time spent running (up to the horizon when censored)
        energy_consumed: Joules drawn by the job's nodes while it ran
        energy_full_speed_equiv: Joules the job needs at full speed
        outcome: completed, killed or censored
        slowed: Whether the job ever ran below full speed
    """

    job_id: int = Field(..., ge=0)
    eco: bool
    node_count: int = Field(..., ge=1)
    submit_time: float = Field(..., ge=0.0)
    start_time: float | None = None
    end_time: float | None = None
    full_speed_runtime: float = Field(..., gt=0.0)
    actual_runtime: float | None = Field(default=None, ge=0.0)
    energy_consumed: float = Field(default=0.0, ge=0.0)
    energy_full_speed_equiv: float = Field(..., ge=0.0)
    outcome: JobOutcome
    slowed: bool = False

    @property
    def stretch(self) -> float | None:
        """(end - submit) / full-speed runtime for completed jobs."""
        if self.outcome is not JobOutcome.COMPLETED or self.end_time is None:
            return None
        return (self.end_time - self.submit_time) / self.full_speed_runtime


class EnergyLedger(BaseModel):
    """Energy of one run split by where it went, in joules.

    `total` is integrated alongside the components; closure means it equals their sum.
    `slowdown_overhead` is informational and already part of `completed`.
    """

    completed: float = 0.0
    killed: float = 0.0
    censored: float = 0.0
    idle: float = 0.0
    total: float = 0.0
    slowdown_overhead: float = 0.0

    def components(self) -> float:
        return self.completed + self.killed + self.censored + self.idle

    def closure_error(self) -> float:
        """Relative difference between total and the sum of components."""
        scale = max(abs(self.total), 1.0)
        return abs(self.total - self.components()) / scale


class RunMetrics(BaseModel):
    """Aggregate results of one run.

    Attributes:
        throughput: Completed jobs per hour of horizon
        mean_stretch: Mean stretch of completed jobs (None without completions)
        kills_total: Killed jobs
        kills_eco: Killed EcoJobs
        wasted_energy_kills: Joules consumed by killed jobs
        wasted_energy_slowdown: Joules above full-speed equivalent for slowed completed jobs
        total_energy: Joules drawn by the platform over the horizon
        censored_count: Jobs still running or queued at the horizon
        unreachable_cap: A cap could not be met even after killing every job
    """

    throughput: float = Field(..., ge=0.0)
    mean_stretch: float | None = Field(default=None, ge=1.0 - 1e-9)
    kills_total: int = Field(default=0, ge=0)
    kills_eco: int = Field(default=0, ge=0)
    wasted_energy_kills: float = Field(default=0.0, ge=0.0)
    wasted_energy_slowdown: float = Field(default=0.0, ge=0.0)
    total_energy: float = Field(default=0.0, ge=0.0)
    censored_count: int = Field(default=0, ge=0)
    unreachable_cap: bool = False
