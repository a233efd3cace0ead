"""Job-table + node-power ingestion into simulator workloads.

The job table gives each job's start, end and nodes; the power series gives per-node CPU
and per-GPU power samples. Each job's nodes are cut out of their series, resampled to
20 s windows aligned to the job start (step-hold, then time-weighted mean) and converted
to compute amounts with the resource power models.
"""

import math
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import numpy.typing as npt
import pandas as pd
from pydantic import BaseModel, Field, field_validator, model_validator

from src.cluster.platform import PlatformConfig
from src.domain.errors import (
    E_INGEST_COVERAGE_GAP,
    E_INGEST_FORMAT,
    E_INGEST_NODE_CONFLICT,
    IngestionError,
    with_code,
)
from src.power.model import compute_rate_array
from src.utils.logging_config import get_logger
from src.workload.io import WorkloadJobModel, save_workload
from src.workload.profile import WINDOW_SECONDS, ComputeProfile

FloatArray = npt.NDArray[np.float64]

logger = get_logger("ecosim.ingest")

JOB_COLUMNS = ("job_id", "start_unix", "end_unix", "node_ids")
GPU_COLUMNS = ("gpu0_watts", "gpu1_watts", "gpu2_watts", "gpu3_watts")
POWER_COLUMNS = ("node_id", "timestamp_unix", "cpu_watts", *GPU_COLUMNS)
DEFAULT_MAX_GAP = 60.0


class JobTableRow(BaseModel):
    """One row of the job table.

    Attributes:
        job_id: Identifier from the job table
        start_time: Start in seconds
        end_time: End in seconds (> start_time)
        node_ids: Nodes the job ran on (non-empty)
    """

    job_id: str
    start_time: float
    end_time: float
    node_ids: tuple[str, ...] = Field(..., min_length=1)

    @field_validator("node_ids")
    @classmethod
    def validate_unique_nodes(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        if len(set(v)) != len(v):
            raise ValueError(with_code("node_ids must be unique", E_INGEST_FORMAT))
        return v

    @model_validator(mode="after")
    def validate_interval(self) -> "JobTableRow":
        if not self.start_time < self.end_time:
            raise ValueError(
                with_code(f"job {self.job_id}: start must precede end", E_INGEST_FORMAT)
            )
        return self


@dataclass(frozen=True, slots=True, eq=False)
class NodePowerSeries:
    """Power samples of one node.

    Attributes:
        node_id: Node identifier
        timestamps: Sample times in seconds, non-decreasing
        power: Array of shape (5, samples): CPU watts then four GPU watts
    """

    node_id: str
    timestamps: FloatArray
    power: FloatArray

    def __post_init__(self) -> None:
        if self.timestamps.size == 0:
            raise IngestionError(f"node {self.node_id}: no samples", E_INGEST_FORMAT)
        if bool(np.any(np.diff(self.timestamps) < 0.0)):
            raise IngestionError(f"node {self.node_id}: timestamps decrease", E_INGEST_FORMAT)
        if bool(np.any(self.power < 0.0)):
            raise IngestionError(f"node {self.node_id}: negative power", E_INGEST_FORMAT)

    def window_means(self, edges: FloatArray) -> FloatArray:
        """Time-weighted mean of the step-hold signal between consecutive edges.

        Returns:
            Array of shape (5, len(edges) - 1)
        """
        t = self.timestamps
        # Integral of the step function from the first sample up to each sample time.
        seg = np.diff(t)[np.newaxis, :] * self.power[:, :-1]
        cumulative = np.concatenate([np.zeros((5, 1)), np.cumsum(seg, axis=1)], axis=1)
        idx = np.searchsorted(t, edges, side="right") - 1
        integral = cumulative[:, idx] + self.power[:, idx] * (edges - t[idx])[np.newaxis, :]
        widths = np.diff(edges)
        means: FloatArray = np.diff(integral, axis=1) / widths[np.newaxis, :]
        return means

    def coverage_gaps(self, start: float, end: float, max_gap: float) -> list[str]:
        """Describe every hole in the series over [start, end)."""
        t = self.timestamps
        # Leading hole: the series starts after the job.
        if t[0] > start:
            return [f"node {self.node_id}: first sample {t[0]:g} after job start {start:g}"]
        # Every hole between the job bounds and the samples inside them.
        inside = t[(t > start) & (t < end)]
        points = np.concatenate([[start], inside, [end]])
        gaps = np.diff(points)
        return [
            f"node {self.node_id}: {gap:g} s without samples after {points[i]:g}"
            for i, gap in enumerate(gaps)
            if gap > max_gap
        ]


@dataclass(slots=True, eq=False)
class JobPowerProfile:
    """Per-window power of one job, windows aligned to its start.

    Attributes:
        job_id: Identifier from the job table
        start_time: Job start in seconds
        end_time: Job end in seconds
        node_ids: Nodes in job-table order
        cpu_power: Shape (nodes, windows), mean CPU watts
        gpu_power: Shape (nodes, 4, windows), mean GPU watts
        coverage: Shape (windows,), seconds of each window inside the job (20 except the last)
        clamped: Number of window values lowered to p_max
    """

    job_id: str
    start_time: float
    end_time: float
    node_ids: tuple[str, ...]
    cpu_power: FloatArray
    gpu_power: FloatArray
    coverage: FloatArray
    clamped: int = field(default=0)

    @property
    def windows(self) -> int:
        return int(self.coverage.size)


class IngestReport(BaseModel):
    """Summary of one ingestion."""

    jobs: int = 0
    clamped_values: int = 0
    windows_per_job: dict[str, int] = Field(default_factory=dict)


def window_edges(start: float, end: float) -> FloatArray:
    """Edges of 20 s windows from start, the last window truncated at end."""
    count = max(1, math.ceil((end - start) / WINDOW_SECONDS))
    edges = start + WINDOW_SECONDS * np.arange(count + 1, dtype=np.float64)
    edges[-1] = end
    return edges


def load_job_table(path: Path) -> list[JobTableRow]:
    """Read the job-table CSV (job_id,start_unix,end_unix,node_ids with ';' separators).

    Raises:
        IngestionError: If the file is missing columns or holds invalid rows (error code: E_INGEST_FORMAT)
    """
    try:
        frame = pd.read_csv(path, dtype={"job_id": str, "node_ids": str})
    except (OSError, ValueError) as e:
        raise IngestionError(f"cannot read job table {path}: {e}", E_INGEST_FORMAT) from e
    missing = [c for c in JOB_COLUMNS if c not in frame.columns]
    if missing:
        raise IngestionError(f"job table lacks columns {missing}", E_INGEST_FORMAT)
    rows = []
    for record in frame.itertuples(index=False):
        try:
            rows.append(
                JobTableRow(
                    job_id=str(record.job_id),
                    start_time=float(record.start_unix),
                    end_time=float(record.end_unix),
                    node_ids=tuple(n.strip() for n in str(record.node_ids).split(";") if n.strip()),
                )
            )
        except ValueError as e:
            raise IngestionError(f"invalid job row {record.job_id}: {e}", E_INGEST_FORMAT) from e
    return rows


def load_power_series(path: Path) -> dict[str, NodePowerSeries]:
    """Read the power-sample CSV into per-node series sorted by timestamp.

    Raises:
        IngestionError: If the file is missing columns or holds invalid samples (error code: E_INGEST_FORMAT)
    """
    try:
        frame = pd.read_csv(path, dtype={"node_id": str})
    except (OSError, ValueError) as e:
        raise IngestionError(f"cannot read power samples {path}: {e}", E_INGEST_FORMAT) from e
    missing = [c for c in POWER_COLUMNS if c not in frame.columns]
    if missing:
        raise IngestionError(f"power samples lack columns {missing}", E_INGEST_FORMAT)
    series = {}
    ordered = frame.sort_values(["node_id", "timestamp_unix"], kind="stable")
    for node_id, group in ordered.groupby("node_id", sort=True):
        series[str(node_id)] = NodePowerSeries(
            node_id=str(node_id),
            timestamps=group["timestamp_unix"].to_numpy(dtype=np.float64),
            power=group[["cpu_watts", *GPU_COLUMNS]].to_numpy(dtype=np.float64).T.copy(),
        )
    return series


def _check_conflicts(rows: Sequence[JobTableRow]) -> list[str]:
    per_node: dict[str, list[JobTableRow]] = defaultdict(list)
    for row in rows:
        for node in row.node_ids:
            per_node[node].append(row)
    problems = []
    # Per node, jobs sorted by start must each end before the next begins.
    for node in sorted(per_node):
        jobs = sorted(per_node[node], key=lambda r: (r.start_time, r.job_id))
        for prev, nxt in zip(jobs, jobs[1:], strict=False):
            if nxt.start_time < prev.end_time:
                problems.append(f"node {node}: jobs {prev.job_id} and {nxt.job_id} overlap")
    return problems


def extract_job_power(
    rows: Sequence[JobTableRow],
    series: dict[str, NodePowerSeries],
    max_gap: float = DEFAULT_MAX_GAP,
) -> list[JobPowerProfile]:
    """Cut each job's per-node power out of the node series and resample to 20 s windows.

    Args:
        rows: Job-table rows
        series: Node power series keyed by node id
        max_gap: Longest tolerated stretch without samples, in seconds

    Returns:
        One JobPowerProfile per row, sorted by job_id

    Raises:
        IngestionError: Listing every overlap (error code: E_INGEST_NODE_CONFLICT) or every
            coverage gap (error code: E_INGEST_COVERAGE_GAP)
    """
    # Overlaps first: gap checks assume every node runs one job at a time.
    conflicts = _check_conflicts(rows)
    if conflicts:
        raise IngestionError("overlapping jobs on a node", E_INGEST_NODE_CONFLICT, conflicts)

    # Collect every gap across all jobs before failing.
    gaps: list[str] = []
    for row in rows:
        for node in row.node_ids:
            if node not in series:
                gaps.append(f"job {row.job_id}: node {node} has no power samples")
                continue
            gaps.extend(
                f"job {row.job_id}: {gap}"
                for gap in series[node].coverage_gaps(row.start_time, row.end_time, max_gap)
            )
    if gaps:
        raise IngestionError("power series do not cover the jobs", E_INGEST_COVERAGE_GAP, gaps)

    profiles = []
    for row in sorted(rows, key=lambda r: r.job_id):
        edges = window_edges(row.start_time, row.end_time)
        # Shape (nodes, 5, windows): CPU then the four GPUs.
        means = np.stack([series[node].window_means(edges) for node in row.node_ids])
        profiles.append(
            JobPowerProfile(
                job_id=row.job_id,
                start_time=row.start_time,
                end_time=row.end_time,
                node_ids=row.node_ids,
                cpu_power=means[:, 0, :],
                gpu_power=means[:, 1:, :],
                coverage=np.diff(edges),
            )
        )
    return profiles


def power_to_compute_profile(
    power: JobPowerProfile, platform: PlatformConfig
) -> ComputeProfile:
    """Convert per-window power to compute amounts: rate(window power) * covered seconds.

    Window powers above p_max are lowered to p_max (counted in `power.clamped`).

    Raises:
        PowerModelError: If a window power is not positive (error code: E_NON_POSITIVE_POWER)
    """
    cpu_model, gpu_model = platform.cpu_model, platform.gpu_model
    over = int(np.sum(power.cpu_power > cpu_model.p_max) + np.sum(power.gpu_power > gpu_model.p_max))
    if over:
        logger.warning(
            f"Job {power.job_id}: {over} window powers above p_max clamped",
            extra={"context": {"job_id": power.job_id, "clamped": over}},
        )
    power.clamped = over
    cpu_rate = compute_rate_array(cpu_model, np.minimum(power.cpu_power, cpu_model.p_max))
    gpu_rate = compute_rate_array(gpu_model, np.minimum(power.gpu_power, gpu_model.p_max))
    return ComputeProfile(
        cpu=cpu_rate * power.coverage[np.newaxis, :],
        gpu=gpu_rate * power.coverage[np.newaxis, np.newaxis, :],
    )


def ingest(
    jobs_csv: Path,
    power_csv: Path,
    out_path: Path,
    platform: PlatformConfig,
    max_gap: float = DEFAULT_MAX_GAP,
) -> IngestReport:
    """Build a workload file from a job table and node power samples.

    Submit times are rebased so the earliest job start is 0; jobs keep job_id order and
    receive indices 0..n-1 in that order.
    """
    rows = load_job_table(jobs_csv)
    series = load_power_series(power_csv)
    profiles = extract_job_power(rows, series, max_gap)
    # Rebase so the earliest start is t = 0.
    epoch = min((p.start_time for p in profiles), default=0.0)

    report = IngestReport()
    models = []
    for index, power in enumerate(profiles):
        compute = power_to_compute_profile(power, platform)
        models.append(
            WorkloadJobModel(
                id=index,
                source_id=power.job_id,
                submit_time=power.start_time - epoch,
                node_count=compute.node_count,
                eco=False,
                cpu=compute.cpu.tolist(),
                gpu=compute.gpu.tolist(),
            )
        )
        report.jobs += 1
        report.clamped_values += power.clamped
        report.windows_per_job[power.job_id] = power.windows
    save_workload(out_path, models)
    logger.info(
        f"Ingested {report.jobs} jobs into {out_path}",
        extra={"event_type": "ingest", "context": report.model_dump(exclude={"windows_per_job"})},
    )
    return report
