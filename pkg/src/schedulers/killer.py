"""FCFS killer: the baseline that kills newest jobs until the cap is met."""

from src.schedulers.actions import Action, JobView, PowerProjection, SchedulerKind
from src.schedulers.base import BaseScheduler


class KillerScheduler(BaseScheduler):
    """Never slows anything; every job runs at full speed or is killed."""

    kind = SchedulerKind.KILLER

    def on_cap_start(self, view: PowerProjection) -> list[Action]:
        decision = self.select_victims(view)
        if decision.victims or decision.unreachable:
            return [decision]
        return []

    def admission_step(
        self, view: PowerProjection, candidate: JobView, released_idle: float
    ) -> int | None:
        if self._fits_at(view, candidate, released_idle, view.max_step):
            return view.max_step
        return None
