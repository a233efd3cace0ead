"""Discrete-event engine: event queue, job progress under DVFS, run loop."""

from .engine import (
    DecisionLogEntry,
    PowerSample,
    RunOutputs,
    RunState,
    SimulationEngine,
    run,
)
from .events import Event, EventKind, EventQueue
from .progress import JobProgress, advance_job, predict_finish, remaining_time

__all__ = [
    "DecisionLogEntry",
    "Event",
    "EventKind",
    "EventQueue",
    "JobProgress",
    "PowerSample",
    "RunOutputs",
    "RunState",
    "SimulationEngine",
    "advance_job",
    "predict_finish",
    "remaining_time",
    "run",
]
