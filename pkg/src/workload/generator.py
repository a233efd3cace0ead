"""Seeded synthetic workload generation.

Jobs arrive as a Poisson process over the horizon. Each job draws a size, a log-uniform
duration, an intensity and an eco flag; its profile is a bounded random walk around the
intensity. Three independent child streams of the run seed drive arrivals/sizes, eco flags
and profile shapes, so for a fixed seed the eco sets are nested across eco percentages and
everything else is identical.
"""

import math
from collections.abc import Iterable, Iterator

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.cluster.platform import PlatformConfig
from src.domain.errors import E_INVALID_DISTRIBUTION, WorkloadError, with_code
from src.utils.logging_config import get_logger
from src.workload.profile import WINDOW_SECONDS, ComputeProfile, Job

logger = get_logger("ecosim.workload")


class GeneratorParams(BaseModel):
    """Distribution parameters of the synthetic workload.

    Attributes:
        target_utilization: Node-time utilisation the arrival rate aims for
        arrival_rate_per_hour: Explicit Poisson rate; overrides target_utilization
        node_counts: Allowed job sizes (uniform), truncated to the platform size
        duration_min: Shortest full-speed duration in seconds
        duration_max: Longest full-speed duration in seconds
        intensity_min: Lowest per-job intensity (fraction of window capacity)
        intensity_max: Highest per-job intensity
        modulation: Random-walk bound around the intensity (0.2 = +-20%)
        walk_step: Standard deviation of one random-walk step
    """

    target_utilization: float = Field(default=0.8, gt=0.0, le=1.0)
    arrival_rate_per_hour: float | None = Field(default=None, gt=0.0)
    node_counts: tuple[int, ...] = Field(default=(1, 2, 4, 8), min_length=1)
    duration_min: float = Field(default=600.0, gt=0.0)
    duration_max: float = Field(default=28_800.0, gt=0.0)
    intensity_min: float = Field(default=0.6, gt=0.0, le=1.0)
    intensity_max: float = Field(default=1.0, gt=0.0, le=1.0)
    modulation: float = Field(default=0.2, ge=0.0, lt=1.0)
    walk_step: float = Field(default=0.05, ge=0.0)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def validate_ranges(self) -> "GeneratorParams":
        """Check min <= max pairs and positive sizes."""
        if self.duration_min > self.duration_max:
            raise ValueError(with_code("duration_min > duration_max", E_INVALID_DISTRIBUTION))
        if self.intensity_min > self.intensity_max:
            raise ValueError(with_code("intensity_min > intensity_max", E_INVALID_DISTRIBUTION))
        if any(n < 1 for n in self.node_counts):
            raise ValueError(with_code("node_counts must be >= 1", E_INVALID_DISTRIBUTION))
        return self

    def sizes_for(self, platform: PlatformConfig) -> tuple[int, ...]:
        """Allowed sizes truncated to the platform; the platform size if none fit."""
        sizes = tuple(n for n in self.node_counts if n <= platform.node_count)
        return sizes or (platform.node_count,)

    def mean_duration(self) -> float:
        """Mean of the log-uniform duration distribution in seconds."""
        lo, hi = self.duration_min, self.duration_max
        if hi == lo:
            return lo
        return (hi - lo) / math.log(hi / lo)

    def arrival_rate(self, platform: PlatformConfig) -> float:
        """Poisson arrival rate in jobs per second."""
        if self.arrival_rate_per_hour is not None:
            return self.arrival_rate_per_hour / 3600.0
        sizes = self.sizes_for(platform)
        mean_nodes = sum(sizes) / len(sizes)
        return self.target_utilization * platform.node_count / (mean_nodes * self.mean_duration())


def _eco_threshold(eco_percent: float) -> float:
    if not 0.0 <= eco_percent <= 100.0:
        raise WorkloadError(f"eco_percent must be in [0, 100], got {eco_percent}", E_INVALID_DISTRIBUTION)
    return eco_percent / 100.0


def synth_profile(
    rng: np.random.Generator,
    node_count: int,
    duration_windows: int,
    intensity: float,
    platform: PlatformConfig,
    modulation: float = 0.2,
    walk_step: float = 0.05,
) -> ComputeProfile:
    """Synthesise a profile shaped like measured multi-node power traces.

    Each resource stream follows its own random walk bounded to [1 - modulation,
    1 + modulation] around `intensity * capacity`, clamped to the window capacity.

    Args:
        rng: Generator for the walk
        node_count: Nodes of the job
        duration_windows: Windows at full speed (>= 1)
        intensity: Fraction of full-speed capacity, in (0, 1]
        platform: Platform whose power models fix the window capacities
        modulation: Walk bound (0 disables the walk)
        walk_step: Standard deviation of one walk step

    Returns:
        ComputeProfile with node_count CPU streams and 4 * node_count GPU streams

    Raises:
        WorkloadError: If duration_windows < 1 or intensity outside (0, 1] (error code: E_INVALID_DISTRIBUTION)
    """
    if duration_windows < 1 or not 0.0 < intensity <= 1.0:
        raise WorkloadError(
            f"need duration_windows >= 1 and 0 < intensity <= 1, got {duration_windows}, {intensity}",
            E_INVALID_DISTRIBUTION,
        )
    gpus = platform.gpus_per_node
    streams = node_count * (1 + gpus)
    multiplier = np.ones((streams, duration_windows))
    if modulation > 0.0 and walk_step > 0.0:
        steps = rng.normal(0.0, walk_step, size=(streams, duration_windows))
        level = np.ones(streams)
        for k in range(duration_windows):
            level = np.clip(level + steps[:, k], 1.0 - modulation, 1.0 + modulation)
            multiplier[:, k] = level

    cpu_cap = platform.cpu_model.max_rate * WINDOW_SECONDS
    gpu_cap = platform.gpu_model.max_rate * WINDOW_SECONDS
    cpu = np.clip(intensity * cpu_cap * multiplier[:node_count], 0.0, cpu_cap)
    gpu = np.clip(intensity * gpu_cap * multiplier[node_count:], 0.0, gpu_cap)
    return ComputeProfile(cpu=cpu, gpu=gpu.reshape(node_count, gpus, duration_windows))


def generate_stream(
    seed: int,
    horizon: float,
    eco_percent: float,
    params: GeneratorParams,
    platform: PlatformConfig,
) -> Iterator[Job]:
    """Lazily generate the job stream of one run.

    Args:
        seed: Run seed (>= 0)
        horizon: Last possible submission time in seconds (exclusive)
        eco_percent: Probability in percent that a job is an EcoJob
        params: Distribution parameters
        platform: Platform the jobs target

    Yields:
        Jobs in submission order with integer submit times

    Raises:
        WorkloadError: If seed < 0 or eco_percent outside [0, 100] (error code: E_INVALID_DISTRIBUTION)
    """
    if seed < 0:
        raise WorkloadError(f"seed must be >= 0, got {seed}", E_INVALID_DISTRIBUTION)
    threshold = _eco_threshold(eco_percent)
    arrival_ss, eco_ss, shape_ss = np.random.SeedSequence(seed).spawn(3)
    arrivals = np.random.default_rng(arrival_ss)
    eco_draws = np.random.default_rng(eco_ss)
    shapes = np.random.default_rng(shape_ss)

    sizes = params.sizes_for(platform)
    mean_gap = 1.0 / params.arrival_rate(platform)
    log_lo, log_hi = math.log(params.duration_min), math.log(params.duration_max)
    logger.debug(
        "Generating workload",
        extra={"context": {"seed": seed, "eco_percent": eco_percent, "mean_gap_s": mean_gap}},
    )

    clock = 0.0
    job_id = 0
    while True:
        clock += float(arrivals.exponential(mean_gap))
        submit = math.floor(clock)
        if submit >= horizon:
            return
        node_count = int(sizes[int(arrivals.integers(len(sizes)))])
        duration = math.exp(float(arrivals.uniform(log_lo, log_hi)))
        windows = max(1, math.ceil(duration / WINDOW_SECONDS))
        intensity = float(arrivals.uniform(params.intensity_min, params.intensity_max))
        eco = bool(eco_draws.random() < threshold)
        profile = synth_profile(
            shapes, node_count, windows, intensity, platform, params.modulation, params.walk_step
        )
        yield Job(
            id=job_id,
            submit_time=float(submit),
            node_count=node_count,
            eco=eco,
            profile=profile,
        )
        job_id += 1


def assign_eco_flags(jobs: Iterable[Job], seed: int, eco_percent: float) -> list[Job]:
    """Redraw eco flags of a fixed workload with the same child stream the generator uses.

    Jobs are flagged in their given order, so the flagged sets are nested across eco
    percentages for a fixed seed.
    """
    threshold = _eco_threshold(eco_percent)
    _, eco_ss, _ = np.random.SeedSequence(seed).spawn(3)
    eco_draws = np.random.default_rng(eco_ss)
    flagged = []
    for job in jobs:
        job.eco = bool(eco_draws.random() < threshold)
        flagged.append(job)
    return flagged
