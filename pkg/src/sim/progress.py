"""Execution of one job's compute profile under node-wide DVFS.

At ladder fraction f a resource stream runs at most at R(f). Window i of the profile
takes T_i(f) = max(20, max over streams of c_i / R(f)) seconds, and every stream
delivers c_i / T_i during it, so all streams of a window finish together. Progress is
the current window index plus the fraction of it already done, which is independent of
f, so a DVFS change mid-window only rescales the remaining time.
"""

from dataclasses import dataclass

import numpy as np

from src.cluster.platform import PlatformConfig
from src.power.model import FloatArray, capped_power_array, rate_at_dvfs
from src.workload.profile import WINDOW_SECONDS, Job


@dataclass(frozen=True, slots=True, eq=False)
class SliceTable:
    """Per-window wall time and power of a job at one ladder index.

    Attributes:
        durations: Window wall times in seconds
        power: Power of the job's nodes during each window, in watts
        tail: tail[i] = sum of durations after window i
    """

    durations: FloatArray
    power: FloatArray
    tail: FloatArray


class JobProgress:
    """Progress and per-step caches of one running job.

    Attributes:
        job: The job
        step: Current ladder index
        window: Index of the window being processed (== windows once done)
        phase: Fraction of the current window already processed, in [0, 1)
        energy: Joules consumed so far
        version: Bumped on every DVFS change to invalidate predicted finishes
        slowed: Whether the job ever ran below full speed
    """

    def __init__(self, job: Job, platform: PlatformConfig, step: int) -> None:
        self.job = job
        self.platform = platform
        self.step = step
        self.window = 0
        self.phase = 0.0
        self.energy = 0.0
        self.version = 0
        self.slowed = step < platform.max_step

        self._cpu = job.profile.cpu
        self._gpu = job.profile.gpu_streams()
        # Highest per-window demand from each window to the end, as a full-speed rate.
        self._cpu_peak = np.maximum.accumulate(self._cpu[:, ::-1], axis=1)[:, ::-1] / WINDOW_SECONDS
        self._gpu_peak = np.maximum.accumulate(self._gpu[:, ::-1], axis=1)[:, ::-1] / WINDOW_SECONDS
        self._tables: dict[int, SliceTable] = {}
        self._ladder = np.asarray(platform.dvfs_ladder, dtype=np.float64)
        self._projected: tuple[int, tuple[float, ...]] | None = None

    @property
    def windows(self) -> int:
        return self.job.profile.windows

    @property
    def done(self) -> bool:
        return self.window >= self.windows

    @property
    def idle_floor(self) -> float:
        return self.job.node_count * self.platform.node_idle_power

    def table(self, step: int | None = None) -> SliceTable:
        step = self.step if step is None else step
        cached = self._tables.get(step)
        if cached is not None:
            return cached

        state = self.platform.dvfs_state(step)
        cpu_model, gpu_model = self.platform.cpu_model, self.platform.gpu_model
        cpu_ceiling = rate_at_dvfs(cpu_model, state)
        gpu_ceiling = rate_at_dvfs(gpu_model, state)
        durations = np.maximum(
            WINDOW_SECONDS,
            np.maximum(self._cpu.max(axis=0) / cpu_ceiling, self._gpu.max(axis=0) / gpu_ceiling),
        )
        power = capped_power_array(cpu_model, self._cpu / durations, state.power_fraction).sum(
            axis=0
        ) + capped_power_array(gpu_model, self._gpu / durations, state.power_fraction).sum(axis=0)
        tail = np.concatenate([np.cumsum(durations[::-1])[::-1][1:], [0.0]])
        table = SliceTable(durations=durations, power=power, tail=tail)
        self._tables[step] = table
        return table

    def power_by_step(self) -> tuple[float, ...]:
        """Worst-case power of the job's nodes from the current window on, per ladder index.

        Each stream is charged its highest remaining demand, limited to the step's rate
        ceiling; actual power never exceeds this value. Computed once per window.
        """
        i = min(self.window, self.windows - 1)
        if self._projected is None or self._projected[0] != i:
            fractions = self._ladder[np.newaxis, :]
            power = capped_power_array(
                self.platform.cpu_model, self._cpu_peak[:, i, np.newaxis], fractions
            ).sum(axis=0) + capped_power_array(
                self.platform.gpu_model, self._gpu_peak[:, i, np.newaxis], fractions
            ).sum(axis=0)
            self._projected = (i, tuple(float(p) for p in power))
        return self._projected[1]

    def current_power(self) -> float:
        """Power the job's nodes draw right now (idle floor once every window is done)."""
        if self.done:
            return self.idle_floor
        return float(self.table().power[self.window])

    def set_step(self, step: int) -> None:
        self.step = step
        self.version += 1
        if step < self.platform.max_step:
            self.slowed = True

    def full_speed_energy(self) -> float:
        """Joules the whole profile needs at full speed."""
        table = self.table(self.platform.max_step)
        return float(np.dot(table.durations, table.power))


def advance_job(progress: JobProgress, dt: float) -> float:
    """Process `dt` seconds of the job at its current step.

    Once every window is done the nodes are charged their idle floor until the engine
    records the finish.

    Returns:
        Joules consumed during dt
    """
    if dt <= 0.0:
        return 0.0
    table = progress.table()
    energy = 0.0
    while dt > 0.0 and not progress.done:
        i = progress.window
        remaining = (1.0 - progress.phase) * table.durations[i]
        if dt >= remaining:
            energy += remaining * table.power[i]
            dt -= remaining
            progress.window += 1
            progress.phase = 0.0
        else:
            progress.phase += dt / table.durations[i]
            energy += dt * table.power[i]
            dt = 0.0
    if dt > 0.0:
        energy += dt * progress.idle_floor
    progress.energy += float(energy)
    return float(energy)


def remaining_time(progress: JobProgress) -> float:
    """Exact wall time left at the current step."""
    if progress.done:
        return 0.0
    table = progress.table()
    i = progress.window
    return float((1.0 - progress.phase) * table.durations[i] + table.tail[i])


def predict_finish(progress: JobProgress, now: float) -> float:
    """Absolute finish time given the current step; recompute after every DVFS change."""
    return now + remaining_time(progress)
