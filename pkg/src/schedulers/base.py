"""Base scheduler interface.

Every policy reacts to the four run events: a cap period starting (or changing while
active), a cap period ending, a job finishing and a job waiting for admission. The
engine owns the FCFS queue and asks `admission_step` about its head only.
"""

from abc import ABC, abstractmethod
from collections.abc import Mapping
from typing import ClassVar

from src.schedulers.actions import Action, JobView, KillDecision, PowerProjection, SchedulerKind, SetDvfs
from src.schedulers.victims import select_victims


class BaseScheduler(ABC):
    """Abstract base class for power-cap scheduling policies."""

    kind: ClassVar[SchedulerKind]

    @abstractmethod
    def on_cap_start(self, view: PowerProjection) -> list[Action]:
        """React to a cap that binds (new, tightened or loosened) at this instant.

        Args:
            view: Projection under the new cap

        Returns:
            Actions leaving projected power under the cap, unless flagged unreachable
        """

    def on_cap_end(self, view: PowerProjection) -> list[Action]:
        """Restore every slowed job to full speed."""
        return [SetDvfs(j.job_id, view.max_step) for j in view.jobs if j.step != view.max_step]

    def on_job_finished(self, view: PowerProjection) -> list[Action]:
        """Hook run after a job's nodes are freed, before queued jobs are admitted."""
        return []

    @abstractmethod
    def admission_step(
        self, view: PowerProjection, candidate: JobView, released_idle: float
    ) -> int | None:
        """Ladder index the queue head may start at, or None if it must wait.

        Args:
            view: Projection of the running platform
            candidate: Queue head with its projected power per ladder index
            released_idle: Idle floor of the nodes the candidate would occupy
        """

    def select_victims(
        self, view: PowerProjection, steps: Mapping[int, int] | None = None
    ) -> KillDecision:
        """Victims bringing the projection (with `steps` applied) under the cap."""
        deficit = view.total(steps) - view.cap
        return select_victims(view.jobs, deficit, self.kind, cap=view.cap, steps=steps)

    @staticmethod
    def _fits_at(
        view: PowerProjection, candidate: JobView, released_idle: float, step: int
    ) -> bool:
        return view.fits(view.total() - released_idle + candidate.power(step))
