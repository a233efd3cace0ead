"""Workload file reading and writing (JSON, see docs/FORMATS.md)."""

import json
from collections.abc import Iterable
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from src.cluster.platform import PlatformConfig
from src.domain.errors import E_WORKLOAD_FORMAT, WorkloadError
from src.workload.profile import WINDOW_SECONDS, ComputeProfile, Job

WORKLOAD_FORMAT = "ecosim-workload/1"


class WorkloadJobModel(BaseModel):
    """One job as stored in a workload file.

    Attributes:
        id: Unique job index
        source_id: Identifier from the originating job table, if any
        submit_time: Submission time in seconds from the workload epoch
        node_count: Whole nodes required
        eco: Eco flag as recorded (runs may redraw it)
        cpu: Per node, compute units per window
        gpu: Per node, per GPU, compute units per window
    """

    id: int = Field(..., ge=0)
    source_id: str | None = None
    submit_time: float = Field(..., ge=0.0)
    node_count: int = Field(..., ge=1)
    eco: bool = False
    cpu: list[list[float]]
    gpu: list[list[list[float]]]


class WorkloadFile(BaseModel):
    """Top-level workload document."""

    format: Literal["ecosim-workload/1"] = WORKLOAD_FORMAT
    window: float = WINDOW_SECONDS
    jobs: list[WorkloadJobModel] = Field(default_factory=list)


def job_to_model(job: Job, source_id: str | None = None) -> WorkloadJobModel:
    """Serialise a Job's static description."""
    return WorkloadJobModel(
        id=job.id,
        source_id=source_id,
        submit_time=job.submit_time,
        node_count=job.node_count,
        eco=job.eco,
        cpu=job.profile.cpu.tolist(),
        gpu=job.profile.gpu.tolist(),
    )


def save_workload(path: Path, jobs: Iterable[WorkloadJobModel]) -> None:
    """Write a workload file (jobs in the given order)."""
    document = WorkloadFile(jobs=list(jobs))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(document.model_dump_json(indent=None) + "\n")


def load_workload(path: Path, platform: PlatformConfig) -> list[Job]:
    """Read a workload file into fresh Job objects sorted by (submit_time, id).

    Raises:
        WorkloadError: If the file is unreadable, malformed or infeasible on the platform
            (error code: E_WORKLOAD_FORMAT / E_INVALID_PROFILE)
    """
    try:
        document = WorkloadFile.model_validate(json.loads(path.read_text()))
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise WorkloadError(f"cannot read workload {path}: {e}", E_WORKLOAD_FORMAT) from e
    if document.window != WINDOW_SECONDS:
        raise WorkloadError(
            f"workload window must be {WINDOW_SECONDS} s, got {document.window}", E_WORKLOAD_FORMAT
        )
    seen: set[int] = set()
    jobs: list[Job] = []
    for item in document.jobs:
        if item.id in seen:
            raise WorkloadError(f"duplicate job id {item.id}", E_WORKLOAD_FORMAT)
        seen.add(item.id)
        try:
            cpu = np.asarray(item.cpu, dtype=np.float64)
            gpu = np.asarray(item.gpu, dtype=np.float64)
        except ValueError as e:
            raise WorkloadError(f"job {item.id}: ragged profile", E_WORKLOAD_FORMAT) from e
        profile = ComputeProfile(cpu=cpu, gpu=gpu)
        profile.check_feasible(platform)
        jobs.append(
            Job(
                id=item.id,
                submit_time=item.submit_time,
                node_count=item.node_count,
                eco=item.eco,
                profile=profile,
            )
        )
    jobs.sort(key=lambda j: (j.submit_time, j.id))
    return jobs
