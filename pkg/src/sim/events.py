"""Deterministic event queue.

Events pop in (time, kind priority, insertion sequence) order. At equal times cap
changes go first, then node reboots, then job completions, then submissions.
"""

import heapq
from dataclasses import dataclass, field
from enum import IntEnum

from src.workload.profile import Job


class EventKind(IntEnum):
    """Event kinds; the value is the tie-break priority at equal time."""

    CAP_CHANGE = 0
    NODE_REBOOT = 1
    JOB_FINISHED = 2
    JOB_SUBMITTED = 3


@dataclass(order=True, frozen=True, slots=True)
class Event:
    """One scheduled event.

    Attributes:
        time: Simulated time in seconds
        kind: Event kind (also the priority)
        seq: Insertion index breaking remaining ties
        job: Submitted job (JOB_SUBMITTED)
        job_id: Finishing job (JOB_FINISHED)
        version: Progress version the finish was predicted from (JOB_FINISHED)
        cap: New cap in watts (CAP_CHANGE)
    """

    time: float
    kind: EventKind
    seq: int
    job: Job | None = field(default=None, compare=False)
    job_id: int | None = field(default=None, compare=False)
    version: int = field(default=0, compare=False)
    cap: float | None = field(default=None, compare=False)


class EventQueue:
    """Min-heap of events."""

    def __init__(self) -> None:
        self._heap: list[Event] = []
        self._seq = 0

    def push(
        self,
        time: float,
        kind: EventKind,
        *,
        job: Job | None = None,
        job_id: int | None = None,
        version: int = 0,
        cap: float | None = None,
    ) -> Event:
        event = Event(time, kind, self._seq, job=job, job_id=job_id, version=version, cap=cap)
        self._seq += 1
        heapq.heappush(self._heap, event)
        return event

    def pop(self) -> Event:
        return heapq.heappop(self._heap)

    def peek_time(self) -> float | None:
        return self._heap[0].time if self._heap else None

    def __len__(self) -> int:
        return len(self._heap)
