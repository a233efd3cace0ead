"""FCFS eco-mode: slow flagged jobs before killing, kill non-flagged jobs first."""

from src.schedulers.actions import (
    Action,
    JobView,
    PowerProjection,
    SchedulerKind,
    SetDvfs,
)
from src.schedulers.base import BaseScheduler


class EcoModeScheduler(BaseScheduler):
    """Eco-mode policy.

    At cap onset every EcoJob drops to the ladder minimum. If that is not enough, jobs
    are killed (non-eco newest first, then eco newest first). Remaining headroom is
    handed back to EcoJobs one ladder step at a time, oldest first, round robin. Only
    EcoJobs ever run below full speed; with no EcoJob running the policy acts exactly
    like the killer.
    """

    kind = SchedulerKind.ECO_MODE

    def on_cap_start(self, view: PowerProjection) -> list[Action]:
        # 1. Slow every EcoJob to the ladder minimum.
        steps = {j.job_id: (0 if j.eco else j.step) for j in view.jobs}
        # 2. Kill only if slowing alone leaves the platform over the cap.
        decision = self.select_victims(view, steps)
        killed = set(decision.victims)
        # 3. Kills can overshoot; hand the surplus back to surviving EcoJobs.
        self._raise(view, steps, killed)

        actions: list[Action] = []
        if decision.victims or decision.unreachable:
            actions.append(decision)
        actions.extend(self._changes(view, steps, killed))
        return actions

    def on_job_finished(self, view: PowerProjection) -> list[Action]:
        if not view.cap_active:
            return []
        # Freed headroom goes to slowed EcoJobs.
        steps = {j.job_id: j.step for j in view.jobs}
        self._raise(view, steps, set())
        return list(self._changes(view, steps, set()))

    def admission_step(
        self, view: PowerProjection, candidate: JobView, released_idle: float
    ) -> int | None:
        # Non-eco jobs start at full speed or not at all.
        if not candidate.eco:
            return view.max_step if self._fits_at(view, candidate, released_idle, view.max_step) else None
        # Highest step that fits.
        for step in range(view.max_step, -1, -1):
            if self._fits_at(view, candidate, released_idle, step):
                return step
        return None

    @staticmethod
    def _raise(view: PowerProjection, steps: dict[int, int], killed: set[int]) -> None:
        """Step EcoJobs up, oldest first, one ladder step per pass, while the cap holds."""
        eco_jobs = [j for j in view.jobs if j.eco and j.job_id not in killed]
        raised = True
        while raised:
            raised = False
            for job in eco_jobs:
                current = steps[job.job_id]
                if current >= view.max_step:
                    continue
                # Round robin: at most one step per job per pass.
                trial = {**steps, job.job_id: current + 1}
                if view.fits(view.total(trial, killed)):
                    steps[job.job_id] = current + 1
                    raised = True

    @staticmethod
    def _changes(view: PowerProjection, steps: dict[int, int], killed: set[int]) -> list[SetDvfs]:
        # Killed jobs are gone; unchanged steps need no action.
        return [
            SetDvfs(job.job_id, steps[job.job_id])
            for job in view.jobs
            if job.job_id not in killed and steps[job.job_id] != job.step
        ]
