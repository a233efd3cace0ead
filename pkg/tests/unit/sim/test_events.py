"""Tests for event ordering."""

from src.sim.events import EventKind, EventQueue


class TestEventQueue:
    """Pop order is (time, kind priority, insertion order)."""

    def test_time_order(self) -> None:
        queue = EventQueue()
        queue.push(30.0, EventKind.JOB_SUBMITTED)
        queue.push(10.0, EventKind.JOB_SUBMITTED)
        assert queue.pop().time == 10.0
        assert queue.peek_time() == 30.0

    def test_priority_at_equal_time(self) -> None:
        queue = EventQueue()
        queue.push(5.0, EventKind.JOB_SUBMITTED)
        queue.push(5.0, EventKind.JOB_FINISHED, job_id=1)
        queue.push(5.0, EventKind.NODE_REBOOT)
        queue.push(5.0, EventKind.CAP_CHANGE, cap=100.0)
        kinds = [queue.pop().kind for _ in range(4)]
        assert kinds == [
            EventKind.CAP_CHANGE,
            EventKind.NODE_REBOOT,
            EventKind.JOB_FINISHED,
            EventKind.JOB_SUBMITTED,
        ]

    def test_insertion_order_breaks_remaining_ties(self) -> None:
        queue = EventQueue()
        queue.push(1.0, EventKind.JOB_FINISHED, job_id=4)
        queue.push(1.0, EventKind.JOB_FINISHED, job_id=2)
        assert [queue.pop().job_id, queue.pop().job_id] == [4, 2]

    def test_empty_queue(self) -> None:
        queue = EventQueue()
        assert queue.peek_time() is None
        assert len(queue) == 0
