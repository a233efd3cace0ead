"""Tests for compute profiles and the job lifecycle."""

import numpy as np
import pytest

from src.cluster.platform import PlatformConfig
from src.domain.errors import E_INVALID_JOB_TRANSITION, SimulationInvariantError, WorkloadError
from src.workload.profile import ComputeProfile, Job, JobStatus


def _profile(
    nodes: int = 1, windows: int = 3, value: float = 10.0, gpu: float | None = None
) -> ComputeProfile:
    return ComputeProfile(
        cpu=np.full((nodes, windows), value),
        gpu=np.full((nodes, 4, windows), value / 10 if gpu is None else gpu),
    )


class TestComputeProfile:
    """Shape checks and derived quantities."""

    def test_derived_sizes(self) -> None:
        profile = _profile(nodes=2, windows=5)
        assert profile.node_count == 2
        assert profile.windows == 5
        assert profile.full_speed_runtime == 100.0
        assert profile.gpu_streams().shape == (8, 5)

    def test_total(self) -> None:
        assert _profile(windows=2).total() == pytest.approx(2 * 10.0 + 8 * 1.0)

    def test_mismatched_shapes_rejected(self) -> None:
        with pytest.raises(WorkloadError, match="E_INVALID_PROFILE"):
            ComputeProfile(cpu=np.ones((1, 3)), gpu=np.ones((1, 4, 2)))

    def test_empty_profile_rejected(self) -> None:
        with pytest.raises(WorkloadError):
            ComputeProfile(cpu=np.ones((1, 0)), gpu=np.ones((1, 4, 0)))

    def test_negative_amount_rejected(self) -> None:
        with pytest.raises(WorkloadError):
            ComputeProfile(cpu=np.full((1, 1), -1.0), gpu=np.ones((1, 4, 1)))

    def test_infeasible_amount(self, platform: PlatformConfig) -> None:
        too_much = platform.cpu_model.max_rate * 20 * 1.01
        with pytest.raises(WorkloadError, match="capacity"):
            _profile(value=too_much).check_feasible(platform)

    def test_full_capacity_is_feasible(self, platform: PlatformConfig) -> None:
        _profile(
            value=platform.cpu_model.max_rate * 20, gpu=platform.gpu_model.max_rate * 20
        ).check_feasible(platform)

    def test_gpu_over_capacity_is_infeasible(self, platform: PlatformConfig) -> None:
        with pytest.raises(WorkloadError, match="capacity"):
            _profile(value=1.0, gpu=platform.gpu_model.max_rate * 20 * 1.01).check_feasible(platform)


class TestJob:
    """queued -> running -> completed | killed."""

    def test_node_count_must_match_profile(self) -> None:
        with pytest.raises(WorkloadError):
            Job(id=0, submit_time=0.0, node_count=2, eco=False, profile=_profile(nodes=1))

    def test_normal_lifecycle(self) -> None:
        job = Job(id=0, submit_time=0.0, node_count=1, eco=False, profile=_profile())
        job.start(5.0, (3,))
        job.complete(65.0)
        assert job.status is JobStatus.COMPLETED
        assert job.node_ids == (3,)
        assert (job.start_time, job.end_time) == (5.0, 65.0)

    def test_kill_after_start(self) -> None:
        job = Job(id=0, submit_time=0.0, node_count=1, eco=True, profile=_profile())
        job.start(0.0, (0,))
        job.kill(10.0)
        assert job.status is JobStatus.KILLED

    def test_illegal_transition_raises(self) -> None:
        job = Job(id=7, submit_time=0.0, node_count=1, eco=False, profile=_profile())
        with pytest.raises(SimulationInvariantError) as exc_info:
            job.complete(1.0)
        assert exc_info.value.code == E_INVALID_JOB_TRANSITION
        assert exc_info.value.state_dump["job_id"] == 7
