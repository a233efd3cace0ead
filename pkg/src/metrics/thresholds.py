"""Feasibility thresholds of a platform: the lowest caps at which work can still run.

Two cap fractions matter:
- min_any_job: one 1-node job can run at the ladder minimum while every other node
  stays powered and idle.
- min_all_slowed: every node runs a saturated job at the ladder minimum.

Both are reported on a 0.01 grid (the smallest grid fraction at or above the exact
value). `brute_force_thresholds` finds the same values by simulating each grid fraction.
"""

import math
from collections.abc import Callable

import numpy as np
from pydantic import BaseModel, Field

from src.cluster.platform import CapEntry, PlatformConfig, PowerCapSchedule
from src.schedulers.eco_mode import EcoModeScheduler
from src.sim.engine import run
from src.utils.logging_config import get_logger
from src.workload.generator import synth_profile
from src.workload.profile import WINDOW_SECONDS, Job

logger = get_logger("ecosim.thresholds")

GRID_STEPS = 100


class FeasibilityThresholds(BaseModel):
    """Cap fractions on the 0.01 grid."""

    min_any_job: float = Field(..., gt=0.0, le=1.0)
    min_all_slowed: float = Field(..., gt=0.0, le=1.0)


def round_up_to_grid(fraction: float, steps: int = GRID_STEPS) -> float:
    """Smallest k/steps >= fraction (within 1e-9), capped at 1.0."""
    return min(math.ceil(fraction * steps - 1e-9), steps) / steps


def feasibility_thresholds(platform: PlatformConfig) -> FeasibilityThresholds:
    """Analytic thresholds from the power model.

    Args:
        platform: Platform configuration

    Returns:
        FeasibilityThresholds with min_any_job <= min_all_slowed
    """
    lowest = platform.dvfs_ladder[0]
    slowed_node = lowest * platform.node_max_power
    any_job = (slowed_node + (platform.node_count - 1) * platform.node_idle_power) / platform.platform_max_power
    all_slowed = platform.node_count * slowed_node / platform.platform_max_power
    return FeasibilityThresholds(
        min_any_job=round_up_to_grid(any_job),
        min_all_slowed=round_up_to_grid(all_slowed),
    )


def _saturated_job(job_id: int, submit_time: float, windows: int, platform: PlatformConfig) -> Job:
    profile = synth_profile(
        np.random.default_rng(0), 1, windows, 1.0, platform, modulation=0.0, walk_step=0.0
    )
    return Job(id=job_id, submit_time=submit_time, node_count=1, eco=True, profile=profile)


def _cap_from(platform: PlatformConfig, at: float, fraction: float) -> PowerCapSchedule:
    cap = fraction * platform.platform_max_power
    return PowerCapSchedule(
        entries=(CapEntry(time=at, cap=cap),), platform_max_power=platform.platform_max_power
    )


def _single_job_starts(platform: PlatformConfig, fraction: float) -> bool:
    """A saturated 1-node EcoJob submitted under the cap on an idle platform starts."""
    job = _saturated_job(0, WINDOW_SECONDS, 3, platform)
    outputs = run(platform, [job], _cap_from(platform, 0.0, fraction), EcoModeScheduler(), 10 * WINDOW_SECONDS)
    return outputs.records[0].start_time is not None


def _busy_platform_survives(platform: PlatformConfig, fraction: float) -> bool:
    """Cap onset over a platform full of saturated EcoJobs kills nothing."""
    jobs = [_saturated_job(i, 0.0, 100, platform) for i in range(platform.node_count)]
    outputs = run(
        platform,
        jobs,
        _cap_from(platform, 5 * WINDOW_SECONDS, fraction),
        EcoModeScheduler(),
        10 * WINDOW_SECONDS,
    )
    return outputs.metrics.kills_total == 0


def _smallest_passing(check: Callable[[PlatformConfig, float], bool], platform: PlatformConfig) -> float:
    for k in range(1, GRID_STEPS + 1):
        fraction = k / GRID_STEPS
        if check(platform, fraction):
            return fraction
    return 1.0


def brute_force_thresholds(platform: PlatformConfig) -> FeasibilityThresholds:
    """Thresholds found by simulating every 0.01 cap fraction with the eco-mode policy."""
    result = FeasibilityThresholds(
        min_any_job=_smallest_passing(_single_job_starts, platform),
        min_all_slowed=_smallest_passing(_busy_platform_survives, platform),
    )
    logger.debug("Brute-force thresholds", extra={"context": result.model_dump()})
    return result
