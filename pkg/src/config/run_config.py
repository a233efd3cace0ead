"""Run configuration schema.

One JSON document describes a run: platform, workload source, cap schedule, scheduler,
eco percentage, seed, horizon and output directory. An optional `sweep` section lists
the parameter grid used by `ecosim sweep`.
"""

import itertools
import math
from pathlib import Path

from pydantic import BaseModel, Field, field_validator, model_validator

from src.cluster.platform import (
    SECONDS_PER_DAY,
    CapEntry,
    PlatformConfig,
    PowerCapSchedule,
    make_cap_schedule,
)
from src.domain.errors import E_CONFIG_INVALID, with_code
from src.schedulers.actions import SchedulerKind
from src.workload.generator import GeneratorParams

DEFAULT_HORIZON = 10 * SECONDS_PER_DAY
DEFAULT_ECO_PERCENTS = (0.0, 10.0, 25.0, 50.0, 75.0, 100.0)
DEFAULT_CAP_FRACTIONS = (0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


class WorkloadSection(BaseModel):
    """Where jobs come from: the seeded generator or a workload file (exactly one).

    Attributes:
        generator: Generator distribution parameters
        path: Workload JSON file (relative paths resolve against the config file)
        backlog_bound: Queue depth at which further arrivals are held (None: unbounded)
    """

    generator: GeneratorParams | None = None
    path: Path | None = None
    backlog_bound: int | None = Field(default=20, ge=1)

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def validate_single_source(self) -> "WorkloadSection":
        if (self.generator is None) == (self.path is None):
            raise ValueError(
                with_code("workload needs exactly one of 'generator' or 'path'", E_CONFIG_INVALID)
            )
        return self


class CapSection(BaseModel):
    """Cap schedule: explicit entries, or the daily 18:00-20:00 shorthand.

    Attributes:
        entries: Explicit (time, cap watts) steps
        cap_fraction: Shorthand cap as a fraction of the platform maximum
        days: Shorthand day count (default: enough days to cover the horizon)
    """

    entries: list[CapEntry] | None = None
    cap_fraction: float | None = Field(default=None, gt=0.0, le=1.0)
    days: int | None = Field(default=None, ge=1)

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def validate_single_form(self) -> "CapSection":
        if (self.entries is None) == (self.cap_fraction is None):
            raise ValueError(
                with_code("cap needs exactly one of 'entries' or 'cap_fraction'", E_CONFIG_INVALID)
            )
        if self.entries is not None and self.days is not None:
            raise ValueError(with_code("'days' only applies to 'cap_fraction'", E_CONFIG_INVALID))
        return self

    def to_schedule(self, platform: PlatformConfig, horizon: float) -> PowerCapSchedule:
        max_power = platform.platform_max_power
        if self.entries is not None:
            return PowerCapSchedule(entries=tuple(self.entries), platform_max_power=max_power)
        assert self.cap_fraction is not None
        days = self.days or max(1, math.ceil(horizon / SECONDS_PER_DAY))
        return make_cap_schedule(days, self.cap_fraction, max_power)


class OutputSection(BaseModel):
    """Where run artifacts are written."""

    directory: Path = Path("results/run")

    model_config = {"extra": "forbid"}


class SweepSpec(BaseModel):
    """Parameter grid of a sweep.

    Attributes:
        schedulers: Policies to compare
        eco_percents: Eco percentages
        cap_fractions: Cap fractions
        seeds: Run seeds
    """

    schedulers: list[SchedulerKind] = Field(
        default_factory=lambda: [SchedulerKind.KILLER, SchedulerKind.ECO_MODE], min_length=1
    )
    eco_percents: list[float] = Field(default_factory=lambda: list(DEFAULT_ECO_PERCENTS), min_length=1)
    cap_fractions: list[float] = Field(default_factory=lambda: list(DEFAULT_CAP_FRACTIONS), min_length=1)
    seeds: list[int] = Field(default_factory=lambda: list(range(1, 31)), min_length=1)

    model_config = {"extra": "forbid"}

    @field_validator("eco_percents")
    @classmethod
    def validate_eco(cls, v: list[float]) -> list[float]:
        if any(not 0.0 <= p <= 100.0 for p in v):
            raise ValueError(with_code("eco_percents must be in [0, 100]", E_CONFIG_INVALID))
        return sorted(set(v))

    @field_validator("cap_fractions")
    @classmethod
    def validate_caps(cls, v: list[float]) -> list[float]:
        if any(not 0.0 < c <= 1.0 for c in v):
            raise ValueError(with_code("cap_fractions must be in (0, 1]", E_CONFIG_INVALID))
        return sorted(set(v))

    @field_validator("seeds")
    @classmethod
    def validate_seeds(cls, v: list[int]) -> list[int]:
        if any(s < 0 for s in v):
            raise ValueError(with_code("seeds must be >= 0", E_CONFIG_INVALID))
        return sorted(set(v))

    def cells(self) -> list[tuple[SchedulerKind, float, float, int]]:
        """Every (scheduler, eco_percent, cap_fraction, seed) in canonical order."""
        schedulers = sorted(set(self.schedulers), key=lambda k: k.value)
        return list(itertools.product(schedulers, self.eco_percents, self.cap_fractions, self.seeds))


class RunConfig(BaseModel):
    """Complete configuration of one run (and the sweep grid around it)."""

    platform: PlatformConfig = Field(default_factory=PlatformConfig)
    workload: WorkloadSection = Field(default_factory=lambda: WorkloadSection(generator=GeneratorParams()))
    cap: CapSection = Field(default_factory=lambda: CapSection(cap_fraction=1.0))
    scheduler: SchedulerKind = SchedulerKind.ECO_MODE
    eco_percent: float = Field(default=0.0, ge=0.0, le=100.0)
    seed: int = Field(default=1, ge=0)
    horizon: float = Field(default=DEFAULT_HORIZON, gt=0.0)
    sample_interval: float = Field(default=60.0, gt=0.0)
    output: OutputSection = Field(default_factory=OutputSection)
    sweep: SweepSpec = Field(default_factory=SweepSpec)

    model_config = {"extra": "forbid"}

    def schedule(self) -> PowerCapSchedule:
        return self.cap.to_schedule(self.platform, self.horizon)

    def with_overrides(
        self,
        *,
        seed: int | None = None,
        scheduler: SchedulerKind | str | None = None,
        eco_percent: float | None = None,
        cap_fraction: float | None = None,
    ) -> "RunConfig":
        """Copy with command-line overrides applied and re-validated."""
        data = self.model_dump(mode="python")
        if seed is not None:
            data["seed"] = seed
        if scheduler is not None:
            data["scheduler"] = scheduler
        if eco_percent is not None:
            data["eco_percent"] = eco_percent
        if cap_fraction is not None:
            # The fraction replaces explicit entries; a configured day count is kept.
            data["cap"] = {**data["cap"], "cap_fraction": cap_fraction, "entries": None}
        return RunConfig.model_validate(data)
