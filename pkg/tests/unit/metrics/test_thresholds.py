"""Tests for feasibility thresholds."""

import pytest

from src.cluster.platform import PlatformConfig
from src.metrics.thresholds import brute_force_thresholds, feasibility_thresholds, round_up_to_grid


class TestRoundUpToGrid:
    """Smallest 0.01 grid point at or above a fraction."""

    @pytest.mark.parametrize(
        "fraction,expected",
        [(0.2101, 0.22), (0.5, 0.5), (0.001, 0.01), (1.2, 1.0)],
    )
    def test_rounding(self, fraction: float, expected: float) -> None:
        assert round_up_to_grid(fraction) == pytest.approx(expected)


class TestFeasibilityThresholds:
    """Analytic thresholds and their simulated counterpart."""

    def test_default_platform(self, platform: PlatformConfig) -> None:
        thresholds = feasibility_thresholds(platform)
        assert thresholds.min_any_job == pytest.approx(0.22)
        assert thresholds.min_all_slowed == pytest.approx(0.50)

    def test_single_node_without_dvfs(self) -> None:
        platform = PlatformConfig(node_count=1, dvfs_ladder=(1.0,))
        thresholds = feasibility_thresholds(platform)
        assert (thresholds.min_any_job, thresholds.min_all_slowed) == (1.0, 1.0)
        assert brute_force_thresholds(platform) == thresholds

    def test_any_job_never_exceeds_all_slowed(self) -> None:
        for nodes in (1, 2, 8, 64):
            thresholds = feasibility_thresholds(PlatformConfig(node_count=nodes))
            assert thresholds.min_any_job <= thresholds.min_all_slowed
