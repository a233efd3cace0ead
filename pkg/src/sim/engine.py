"""Discrete-event simulation of a power-capped cluster.

The engine owns all run state: nodes, the FCFS queue, running jobs and energy
accumulators. Schedulers only see `PowerProjection` snapshots and return actions, which
the engine applies and writes to the decision log.
"""

import math
import time
from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import Any

from pydantic import BaseModel

from src.cluster.platform import (
    Node,
    NodeState,
    PlatformConfig,
    PowerCapSchedule,
    fits_under_cap,
    platform_power,
)
from src.domain.errors import (
    E_CAP_VIOLATION,
    E_ENERGY_LEDGER,
    E_NODE_CONFLICT,
    SimulationInvariantError,
)
from src.metrics.compute import compute_run_metrics
from src.metrics.records import EnergyLedger, JobOutcome, JobRecord, RunMetrics
from src.schedulers.actions import Action, JobView, KillDecision, PowerProjection, SetDvfs
from src.schedulers.base import BaseScheduler
from src.sim.events import Event, EventKind, EventQueue
from src.sim.progress import JobProgress, advance_job, predict_finish
from src.utils.logging_config import get_logger
from src.workload.profile import Job

logger = get_logger("ecosim.engine")

DEFAULT_SAMPLE_INTERVAL = 60.0
LEDGER_TOLERANCE = 1e-6


class PowerSample(BaseModel):
    """Platform power at one instant."""

    time_s: float
    power_w: float
    cap_w: float


class DecisionLogEntry(BaseModel):
    """One line of the per-run decision log.

    Only the fields relevant to `action` are set; the rest are omitted on output.
    """

    time: float
    action: str
    job_id: int | None = None
    step: int | None = None
    from_step: int | None = None
    node_ids: list[int] | None = None
    cap_w: float | None = None
    victims: list[int] | None = None
    deficit_w: float | None = None
    unreachable: bool | None = None


class RunOutputs(BaseModel):
    """Everything one run produces."""

    records: list[JobRecord]
    samples: list[PowerSample]
    decisions: list[DecisionLogEntry]
    ledger: EnergyLedger
    metrics: RunMetrics


@dataclass
class RunState:
    """Mutable state of one run.

    Attributes:
        clock: Current simulated time in seconds
        cap: Cap in effect, in watts
        nodes: All nodes, indexed by id
        queue: Submitted jobs waiting to start, FCFS
        held: Arrivals waiting for the queue to drop below the backlog bound
        running: Progress of running jobs keyed by job id
        records: Records of finished or killed jobs
    """

    clock: float
    cap: float
    nodes: list[Node]
    queue: deque[Job] = field(default_factory=deque)
    held: deque[Job] = field(default_factory=deque)
    running: dict[int, JobProgress] = field(default_factory=dict)
    records: list[JobRecord] = field(default_factory=list)

    def idle_nodes(self) -> list[Node]:
        return [n for n in self.nodes if n.state is NodeState.IDLE]

    def dump(self) -> dict[str, Any]:
        """JSON-friendly snapshot for invariant diagnostics."""
        return {
            "clock": self.clock,
            "cap_w": self.cap,
            "queue": [j.id for j in self.queue],
            "held": [j.id for j in self.held],
            "running": [
                {
                    "job_id": p.job.id,
                    "eco": p.job.eco,
                    "step": p.step,
                    "window": p.window,
                    "phase": p.phase,
                    "node_ids": list(p.job.node_ids),
                }
                for p in self.running.values()
            ],
            "nodes": [
                {"id": n.id, "state": n.state.value, "job_id": n.job_id, "shut_until": n.shut_until}
                for n in self.nodes
            ],
        }


class SimulationEngine:
    """One isolated, single-threaded simulation run.

    Args:
        platform: Platform configuration
        schedule: Cap schedule
        scheduler: Policy deciding slowdowns, kills and admissions
        horizon: Simulated seconds; events at times <= horizon are processed
        backlog_bound: Queue depth at which further arrivals are held (None: unbounded)
        sample_interval: Cadence of power samples between events, in seconds
    """

    def __init__(
        self,
        platform: PlatformConfig,
        schedule: PowerCapSchedule,
        scheduler: BaseScheduler,
        horizon: float,
        backlog_bound: int | None = None,
        sample_interval: float = DEFAULT_SAMPLE_INTERVAL,
    ) -> None:
        if horizon <= 0.0 or sample_interval <= 0.0:
            raise ValueError(f"horizon and sample_interval must be > 0, got {horizon}, {sample_interval}")
        self.platform = platform
        self.schedule = schedule
        self.scheduler = scheduler
        self.horizon = horizon
        self.backlog_bound = backlog_bound
        self.sample_interval = sample_interval

        full = platform.full_speed()
        self.state = RunState(
            clock=0.0,
            cap=schedule.platform_max_power,
            nodes=[Node(id=i, dvfs=full) for i in range(platform.node_count)],
        )
        self._events = EventQueue()
        self._arrivals: Iterator[Job] = iter(())
        self._samples: list[PowerSample] = []
        self._decisions: list[DecisionLogEntry] = []
        self._ledger = EnergyLedger()
        self._unreachable = False
        self._head: JobProgress | None = None

    # -- main loop ---------------------------------------------------------------------

    def run(self, workload: Iterable[Job]) -> RunOutputs:
        """Simulate `workload` (jobs in submission order, possibly lazy) up to the horizon."""
        started = time.perf_counter()
        logger.info(
            "Run started",
            extra={
                "event_type": "run_start",
                "context": {"scheduler": self.scheduler.kind.value, "horizon_s": self.horizon},
            },
        )
        for entry in self.schedule.entries:
            if entry.time <= self.horizon:
                self._events.push(entry.time, EventKind.CAP_CHANGE, cap=entry.cap)
        self._arrivals = iter(workload)
        self._push_next_arrival()

        next_sample = 0.0
        while (t := self._events.peek_time()) is not None and t <= self.horizon:
            # Periodic samples strictly before the next event.
            while next_sample < t:
                self._advance_to(next_sample)
                self._sample()
                next_sample += self.sample_interval
            # All events sharing a timestamp, in queue order.
            self._advance_to(t)
            while self._events.peek_time() == t:
                self._dispatch(self._events.pop())
            # Post-event state; the periodic grid skips past t.
            self._sample()
            while next_sample <= t:
                next_sample += self.sample_interval

        # No events left: sample out to the horizon.
        while next_sample <= self.horizon:
            self._advance_to(next_sample)
            self._sample()
            next_sample += self.sample_interval
        if self.state.clock < self.horizon:
            self._advance_to(self.horizon)
            self._sample()

        outputs = self._finish()
        logger.info(
            "Run finished",
            extra={
                "event_type": "run_end",
                "context": {
                    "scheduler": self.scheduler.kind.value,
                    "jobs": len(outputs.records),
                    "kills": outputs.metrics.kills_total,
                    "elapsed_ms": round((time.perf_counter() - started) * 1000, 1),
                },
            },
        )
        return outputs

    def _dispatch(self, event: Event) -> None:
        if event.kind is EventKind.CAP_CHANGE:
            assert event.cap is not None
            self._on_cap_change(event.cap)
        elif event.kind is EventKind.NODE_REBOOT:
            self._on_node_reboot()
        elif event.kind is EventKind.JOB_FINISHED:
            assert event.job_id is not None
            self._on_job_finished(event.job_id, event.version)
        else:
            assert event.job is not None
            self._on_job_submitted(event.job)

    # -- event handlers ----------------------------------------------------------------

    def _on_cap_change(self, cap: float) -> None:
        self.state.cap = cap
        self._log("cap_change", cap_w=cap)
        # Onset or tightening goes to on_cap_start, release to on_cap_end.
        view = self.projection()
        if view.cap_active:
            actions = self.scheduler.on_cap_start(view)
        else:
            actions = self.scheduler.on_cap_end(view)
        self._apply(actions)
        self.try_start_jobs()

    def _on_node_reboot(self) -> None:
        now = self.state.clock
        for node in self.state.nodes:
            if node.state is not NodeState.SHUT_DOWN or node.shut_until is None or node.shut_until > now:
                continue
            # A node coming back draws its idle floor; defer it while that breaks the cap.
            view = self.projection()
            if view.cap_active and not view.fits(view.total() + self.platform.node_idle_power):
                release = self.schedule.release_time(now)
                node.shut_until = release + self.platform.reboot_delay
                if math.isfinite(node.shut_until):
                    self._events.push(node.shut_until, EventKind.NODE_REBOOT)
                continue
            node.state = NodeState.IDLE
            node.shut_until = None
            node.dvfs = self.platform.full_speed()
            self._log("reboot", node_ids=[node.id])
        self.try_start_jobs()

    def _on_job_finished(self, job_id: int, version: int) -> None:
        progress = self.state.running.get(job_id)
        if progress is None or progress.version != version:
            return  # stale prediction
        job = progress.job
        job.complete(self.state.clock)
        del self.state.running[job_id]
        for node_id in job.node_ids:
            node = self.state.nodes[node_id]
            node.state = NodeState.IDLE
            node.job_id = None
            node.dvfs = self.platform.full_speed()
        self._ledger.completed += progress.energy
        record = self._record(progress, JobOutcome.COMPLETED)
        # Only the excess over full speed counts as slowdown overhead.
        if record.slowed:
            self._ledger.slowdown_overhead += max(
                record.energy_consumed - record.energy_full_speed_equiv, 0.0
            )
        self.state.records.append(record)
        self._log("finish", job_id=job_id)

        self._apply(self.scheduler.on_job_finished(self.projection()))
        self.try_start_jobs()

    def _on_job_submitted(self, job: Job) -> None:
        self._push_next_arrival()
        # Arrivals past the backlog bound wait outside the FCFS queue.
        if self.backlog_bound is not None and len(self.state.queue) >= self.backlog_bound:
            self.state.held.append(job)
            return
        self.state.queue.append(job)
        self.try_start_jobs()

    def _push_next_arrival(self) -> None:
        job = next(self._arrivals, None)
        if job is not None and job.submit_time <= self.horizon:
            self._events.push(job.submit_time, EventKind.JOB_SUBMITTED, job=job)

    # -- admission ---------------------------------------------------------------------

    def try_start_jobs(self) -> list[Job]:
        """Start queued jobs in strict FCFS order while nodes and power allow.

        Stops at the first job that lacks free nodes or that the scheduler will not admit
        under the current cap. Held arrivals enter the queue as it shrinks.

        Returns:
            Jobs started by this call
        """
        started: list[Job] = []
        queue = self.state.queue
        while queue:
            head = queue[0]
            free = self.state.idle_nodes()
            if len(free) < head.node_count:
                break
            # The head can stay blocked for many events; keep its full-speed progress.
            if self._head is None or self._head.job is not head:
                self._head = JobProgress(head, self.platform, self.platform.max_step)
            pending = self._head
            candidate = JobView(
                job_id=head.id,
                eco=head.eco,
                start_time=self.state.clock,
                step=self.platform.max_step,
                power_by_step=pending.power_by_step(),
            )
            released_idle = head.node_count * self.platform.node_idle_power
            step = self.scheduler.admission_step(self.projection(), candidate, released_idle)
            if step is None:
                break
            queue.popleft()
            self._head = None
            self._start(head, tuple(n.id for n in free[: head.node_count]), step, pending)
            started.append(head)
            self._release_held()
        return started

    def _release_held(self) -> None:
        bound = self.backlog_bound
        while self.state.held and (bound is None or len(self.state.queue) < bound):
            job = self.state.held.popleft()
            job.submit_time = self.state.clock
            self.state.queue.append(job)

    def _start(self, job: Job, node_ids: tuple[int, ...], step: int, progress: JobProgress) -> None:
        dvfs = self.platform.dvfs_state(step)
        for node_id in node_ids:
            node = self.state.nodes[node_id]
            if node.state is not NodeState.IDLE:
                raise SimulationInvariantError(
                    f"node {node_id} allocated to job {job.id} while {node.state.value}",
                    E_NODE_CONFLICT,
                    state_dump=self.state.dump(),
                )
            node.state = NodeState.RUNNING
            node.job_id = job.id
            node.dvfs = dvfs
        job.start(self.state.clock, node_ids)
        if step != progress.step:
            progress.set_step(step)
        self.state.running[job.id] = progress
        self._schedule_finish(progress)
        self._log("start", job_id=job.id, step=step, node_ids=list(node_ids))

    def _schedule_finish(self, progress: JobProgress) -> None:
        self._events.push(
            predict_finish(progress, self.state.clock),
            EventKind.JOB_FINISHED,
            job_id=progress.job.id,
            version=progress.version,
        )

    # -- actions -----------------------------------------------------------------------

    def _apply(self, actions: list[Action]) -> None:
        for action in actions:
            if isinstance(action, KillDecision):
                self._kill(action)
            else:
                self._set_dvfs(action)
        # Schedulers must leave the projection under an active cap.
        if actions and not self._unreachable:
            view = self.projection()
            if view.cap_active and not view.fits(view.total()):
                raise SimulationInvariantError(
                    f"projected power {view.total():.3f} W above cap {view.cap:.3f} W after scheduling",
                    E_CAP_VIOLATION,
                    state_dump=self.state.dump(),
                )

    def _kill(self, decision: KillDecision) -> None:
        now = self.state.clock
        self._log(
            "kill_decision",
            victims=list(decision.victims),
            deficit_w=decision.deficit,
            unreachable=decision.unreachable,
        )
        if decision.unreachable:
            self._unreachable = True
            logger.warning(
                "Cap unreachable even after killing every job",
                extra={"context": {"time_s": now, "cap_w": self.state.cap}},
            )
        # Victim nodes stay down until the cap window ends.
        shut_until = self.schedule.release_time(now) + self.platform.reboot_delay
        for job_id in decision.victims:
            progress = self.state.running.pop(job_id)
            job = progress.job
            job.kill(now)
            self._ledger.killed += progress.energy
            self.state.records.append(self._record(progress, JobOutcome.KILLED))
            self._log("kill", job_id=job_id, step=progress.step)
            for node_id in job.node_ids:
                node = self.state.nodes[node_id]
                node.state = NodeState.SHUT_DOWN
                node.job_id = None
                node.shut_until = shut_until
                node.dvfs = self.platform.full_speed()
            self._log("shutdown", job_id=job_id, node_ids=list(job.node_ids))
            if math.isfinite(shut_until):
                self._events.push(shut_until, EventKind.NODE_REBOOT)

    def _set_dvfs(self, action: SetDvfs) -> None:
        progress = self.state.running[action.job_id]
        previous = progress.step
        if action.step == previous:
            return
        progress.set_step(action.step)
        dvfs = self.platform.dvfs_state(action.step)
        for node_id in progress.job.node_ids:
            self.state.nodes[node_id].dvfs = dvfs
        self._schedule_finish(progress)
        self._log(
            "slow" if action.step < previous else "raise",
            job_id=action.job_id,
            from_step=previous,
            step=action.step,
        )
        logger.debug(
            "DVFS change",
            extra={"context": {"job_id": action.job_id, "from": previous, "to": action.step}},
        )

    # -- accounting --------------------------------------------------------------------

    def projection(self) -> PowerProjection:
        """Snapshot of worst-case projected power for the scheduler."""
        jobs = sorted(self.state.running.values(), key=lambda p: (p.job.start_time or 0.0, p.job.id))
        return PowerProjection(
            cap=self.state.cap,
            cap_active=self.schedule.is_active(self.state.cap),
            base_power=len(self.state.idle_nodes()) * self.platform.node_idle_power,
            jobs=tuple(
                JobView(
                    job_id=p.job.id,
                    eco=p.job.eco,
                    start_time=p.job.start_time or 0.0,
                    step=p.step,
                    power_by_step=p.power_by_step(),
                )
                for p in jobs
            ),
            max_step=self.platform.max_step,
        )

    def _advance_to(self, t: float) -> None:
        dt = t - self.state.clock
        if dt <= 0.0:
            return
        increment = len(self.state.idle_nodes()) * self.platform.node_idle_power * dt
        self._ledger.idle += increment
        for job_id in sorted(self.state.running):
            increment += advance_job(self.state.running[job_id], dt)
        self._ledger.total += increment
        self.state.clock = t

    def _sample(self) -> None:
        job_power = {job_id: p.current_power() for job_id, p in self.state.running.items()}
        power = platform_power(self.platform, self.state.nodes, job_power)
        cap = self.state.cap
        self._samples.append(PowerSample(time_s=self.state.clock, power_w=power, cap_w=cap))
        if self.schedule.is_active(cap) and not self._unreachable and not fits_under_cap(power, cap):
            raise SimulationInvariantError(
                f"platform power {power:.3f} W above cap {cap:.3f} W at t={self.state.clock}",
                E_CAP_VIOLATION,
                state_dump=self.state.dump(),
            )

    def _record(self, progress: JobProgress, outcome: JobOutcome) -> JobRecord:
        job = progress.job
        start = job.start_time
        end = job.end_time if outcome is not JobOutcome.CENSORED else None
        runtime = None if start is None else (end if end is not None else self.state.clock) - start
        return JobRecord(
            job_id=job.id,
            eco=job.eco,
            node_count=job.node_count,
            submit_time=job.submit_time,
            start_time=start,
            end_time=end,
            full_speed_runtime=job.profile.full_speed_runtime,
            actual_runtime=runtime,
            energy_consumed=progress.energy,
            energy_full_speed_equiv=progress.full_speed_energy(),
            outcome=outcome,
            slowed=progress.slowed,
        )

    def _finish(self) -> RunOutputs:
        for job_id in sorted(self.state.running):
            progress = self.state.running[job_id]
            self._ledger.censored += progress.energy
            self.state.records.append(self._record(progress, JobOutcome.CENSORED))
        # Queued jobs never started; they are censored without a runtime.
        for job in self.state.queue:
            waiting = JobProgress(job, self.platform, self.platform.max_step)
            self.state.records.append(self._record(waiting, JobOutcome.CENSORED))

        if self._ledger.closure_error() > LEDGER_TOLERANCE:
            raise SimulationInvariantError(
                f"energy ledger does not close: total {self._ledger.total} J vs "
                f"components {self._ledger.components()} J",
                E_ENERGY_LEDGER,
                state_dump=self.state.dump(),
            )
        records = sorted(self.state.records, key=lambda r: r.job_id)
        metrics = compute_run_metrics(records, self._ledger, self.horizon, self._unreachable)
        return RunOutputs(
            records=records,
            samples=self._samples,
            decisions=self._decisions,
            ledger=self._ledger,
            metrics=metrics,
        )

    def _log(self, action: str, **fields: Any) -> None:
        self._decisions.append(DecisionLogEntry(time=self.state.clock, action=action, **fields))


def run(
    platform: PlatformConfig,
    workload: Iterable[Job],
    schedule: PowerCapSchedule,
    scheduler: BaseScheduler,
    horizon: float,
    backlog_bound: int | None = None,
    sample_interval: float = DEFAULT_SAMPLE_INTERVAL,
) -> RunOutputs:
    """Simulate one run.

    Args:
        platform: Platform configuration
        workload: Jobs in submission order; may be a lazy generator
        schedule: Cap schedule
        scheduler: Policy under test
        horizon: Simulated seconds
        backlog_bound: Queue depth at which arrivals are held (None: unbounded)
        sample_interval: Power-sample cadence in seconds

    Returns:
        RunOutputs with job records, power samples, decision log, ledger and metrics

    Raises:
        SimulationInvariantError: On a cap violation, node conflict, illegal job
            transition or open energy ledger
    """
    engine = SimulationEngine(platform, schedule, scheduler, horizon, backlog_bound, sample_interval)
    return engine.run(workload)
