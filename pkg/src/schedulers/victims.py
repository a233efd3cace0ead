"""Kill ordering."""

from collections.abc import Mapping, Sequence

from src.cluster.platform import POWER_TOLERANCE
from src.schedulers.actions import JobView, KillDecision, SchedulerKind


def kill_order(jobs: Sequence[JobView], kind: SchedulerKind) -> list[JobView]:
    """Order running jobs for killing.

    Killer: newest start first. EcoMode: non-eco jobs newest first, then eco jobs newest
    first. Equal start times put the higher job id first.
    """
    newest_first = sorted(jobs, key=lambda j: (j.start_time, j.job_id), reverse=True)
    if kind is SchedulerKind.ECO_MODE:
        return [j for j in newest_first if not j.eco] + [j for j in newest_first if j.eco]
    return newest_first


def select_victims(
    jobs: Sequence[JobView],
    deficit: float,
    kind: SchedulerKind,
    cap: float = 0.0,
    steps: Mapping[int, int] | None = None,
) -> KillDecision:
    """Take the shortest prefix of the kill order whose removal covers `deficit` watts.

    Args:
        jobs: Running jobs
        deficit: Projected power above the cap, in watts
        kind: Scheduler variant fixing the order
        cap: Cap in watts, only used to scale the comparison tolerance
        steps: Ladder overrides applied before killing (EcoMode slows eco jobs first)

    Returns:
        KillDecision; empty when deficit is not positive. If every job must go and the
        deficit is still not covered, all jobs are victims and `unreachable` is set.
    """
    slack = POWER_TOLERANCE * (1.0 + cap)
    if deficit <= slack:
        return KillDecision(victims=(), deficit=0.0)
    steps = steps or {}
    removed = 0.0
    victims: list[int] = []
    for job in kill_order(jobs, kind):
        victims.append(job.job_id)
        removed += job.power(steps.get(job.job_id))
        if removed >= deficit - slack:
            return KillDecision(victims=tuple(victims), deficit=deficit)
    return KillDecision(victims=tuple(victims), deficit=deficit, unreachable=True)
