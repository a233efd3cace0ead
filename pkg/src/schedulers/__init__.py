"""Power-cap scheduling policies: FCFS killer and FCFS eco-mode."""

from .actions import Action, JobView, KillDecision, PowerProjection, SchedulerKind, SetDvfs
from .base import BaseScheduler
from .eco_mode import EcoModeScheduler
from .factory import create_scheduler
from .killer import KillerScheduler
from .victims import kill_order, select_victims

__all__ = [
    "Action",
    "BaseScheduler",
    "EcoModeScheduler",
    "JobView",
    "KillDecision",
    "KillerScheduler",
    "PowerProjection",
    "SchedulerKind",
    "SetDvfs",
    "create_scheduler",
    "kill_order",
    "select_victims",
]
