"""Tests for seeded workload generation."""

import numpy as np
import pytest
from pydantic import ValidationError

from src.cluster.platform import PlatformConfig
from src.domain.errors import WorkloadError
from src.workload.generator import GeneratorParams, assign_eco_flags, generate_stream, synth_profile

DAY = 86_400.0


def _jobs(seed: int, eco_percent: float, platform: PlatformConfig, horizon: float = DAY):
    return list(generate_stream(seed, horizon, eco_percent, GeneratorParams(), platform))


class TestGeneratorParams:
    """Parameter validation and derived rates."""

    def test_inverted_duration_range(self) -> None:
        with pytest.raises(ValidationError, match="E_INVALID_DISTRIBUTION"):
            GeneratorParams(duration_min=100.0, duration_max=10.0)

    def test_sizes_truncated_to_platform(self) -> None:
        small = PlatformConfig(node_count=3)
        assert GeneratorParams().sizes_for(small) == (1, 2)
        assert GeneratorParams(node_counts=(4, 8)).sizes_for(small) == (3,)

    def test_explicit_arrival_rate(self, platform: PlatformConfig) -> None:
        params = GeneratorParams(arrival_rate_per_hour=36.0)
        assert params.arrival_rate(platform) == pytest.approx(0.01)


class TestSynthProfile:
    """Random-walk profile synthesis."""

    def test_saturated_profile_without_walk(self, platform: PlatformConfig) -> None:
        profile = synth_profile(np.random.default_rng(0), 2, 4, 1.0, platform, modulation=0.0)
        np.testing.assert_allclose(profile.cpu, platform.cpu_model.max_rate * 20)
        np.testing.assert_allclose(profile.gpu, platform.gpu_model.max_rate * 20)

    def test_walk_stays_within_capacity(self, platform: PlatformConfig) -> None:
        profile = synth_profile(np.random.default_rng(1), 1, 200, 0.9, platform, modulation=0.3)
        profile.check_feasible(platform)
        assert profile.cpu.min() >= 0.9 * 0.7 * platform.cpu_model.max_rate * 20 - 1e-9

    def test_invalid_intensity(self, platform: PlatformConfig) -> None:
        with pytest.raises(WorkloadError):
            synth_profile(np.random.default_rng(0), 1, 3, 0.0, platform)


class TestGenerateStream:
    """Determinism and eco-flag nesting."""

    def test_same_seed_same_stream(self, platform: PlatformConfig) -> None:
        first, second = _jobs(3, 50.0, platform), _jobs(3, 50.0, platform)
        assert [(j.submit_time, j.node_count, j.eco) for j in first] == [
            (j.submit_time, j.node_count, j.eco) for j in second
        ]
        for a, b in zip(first, second, strict=True):
            np.testing.assert_array_equal(a.profile.cpu, b.profile.cpu)

    def test_submissions_ordered_and_bounded(self, platform: PlatformConfig) -> None:
        jobs = _jobs(5, 0.0, platform)
        times = [j.submit_time for j in jobs]
        assert jobs
        assert times == sorted(times)
        assert all(t < DAY and float(t).is_integer() for t in times)
        assert [j.id for j in jobs] == list(range(len(jobs)))

    def test_eco_sets_are_nested(self, platform: PlatformConfig) -> None:
        low = {j.id for j in _jobs(11, 25.0, platform, 3 * DAY) if j.eco}
        high = {j.id for j in _jobs(11, 75.0, platform, 3 * DAY) if j.eco}
        assert low <= high

    def test_eco_percent_only_changes_flags(self, platform: PlatformConfig) -> None:
        plain, eco = _jobs(2, 0.0, platform), _jobs(2, 100.0, platform)
        assert [(j.submit_time, j.node_count) for j in plain] == [
            (j.submit_time, j.node_count) for j in eco
        ]
        assert not any(j.eco for j in plain)
        assert all(j.eco for j in eco)

    @pytest.mark.parametrize("eco_percent", [0.0, 10.0, 25.0, 50.0, 75.0, 100.0])
    def test_eco_share_matches_setting(self, eco_percent: float, platform: PlatformConfig) -> None:
        # One-window jobs arriving once per second keep 10^4 draws cheap
        params = GeneratorParams(
            arrival_rate_per_hour=3600.0, duration_min=20.0, duration_max=20.0, modulation=0.0
        )
        jobs = list(generate_stream(11, 12_000.0, eco_percent, params, platform))
        assert len(jobs) >= 10_000
        share = 100.0 * sum(job.eco for job in jobs) / len(jobs)
        assert share == pytest.approx(eco_percent, abs=2.0)

    def test_negative_seed(self, platform: PlatformConfig) -> None:
        with pytest.raises(WorkloadError):
            _jobs(-1, 0.0, platform)

    def test_eco_percent_out_of_range(self, platform: PlatformConfig) -> None:
        with pytest.raises(WorkloadError):
            _jobs(1, 101.0, platform)


class TestAssignEcoFlags:
    """Redrawing flags on a fixed workload."""

    def test_matches_generator_flags(self, platform: PlatformConfig) -> None:
        generated = _jobs(4, 40.0, platform)
        redrawn = assign_eco_flags(_jobs(4, 0.0, platform), 4, 40.0)
        assert [j.eco for j in redrawn] == [j.eco for j in generated]
