"""Tests for platform configuration, power aggregation and the cap schedule."""

import math

import pytest
from pydantic import ValidationError

from src.cluster.platform import (
    DEFAULT_LADDER,
    CapEntry,
    Node,
    NodeState,
    PlatformConfig,
    PowerCapSchedule,
    cap_at,
    fits_under_cap,
    make_cap_schedule,
    platform_power,
)


class TestPlatformConfig:
    """Derived powers and ladder validation."""

    def test_default_powers(self, platform: PlatformConfig) -> None:
        assert platform.node_max_power == 1500.0
        assert platform.platform_max_power == 12000.0
        assert platform.node_idle_power == pytest.approx(253.14, abs=0.02)

    def test_default_ladder(self) -> None:
        assert len(DEFAULT_LADDER) == 11
        assert DEFAULT_LADDER[0] == 0.5
        assert DEFAULT_LADDER[-1] == 1.0

    def test_max_step_is_full_speed(self, platform: PlatformConfig) -> None:
        assert platform.max_step == 10
        assert platform.full_speed().power_fraction == 1.0

    @pytest.mark.parametrize(
        "ladder",
        [(), (0.5, 0.9), (0.4, 1.0), (0.5, 0.5, 1.0), (1.0, 0.5)],
    )
    def test_invalid_ladders_are_rejected(self, ladder: tuple[float, ...]) -> None:
        with pytest.raises(ValidationError, match="E_INVALID_LADDER"):
            PlatformConfig(dvfs_ladder=ladder)

    def test_single_point_ladder(self) -> None:
        config = PlatformConfig(node_count=1, dvfs_ladder=(1.0,))
        assert config.max_step == 0

    def test_step_outside_ladder(self, platform: PlatformConfig) -> None:
        with pytest.raises(ValueError, match="E_INVALID_DVFS_STEP"):
            platform.dvfs_state(11)

    def test_zero_nodes_rejected(self) -> None:
        with pytest.raises(ValidationError, match="E_INVALID_PLATFORM"):
            PlatformConfig(node_count=0)

    @pytest.mark.parametrize("delay", [-1.0, math.inf, math.nan])
    def test_bad_reboot_delay_rejected(self, delay: float) -> None:
        with pytest.raises(ValidationError, match="E_INVALID_PLATFORM"):
            PlatformConfig(reboot_delay=delay)


class TestPlatformPower:
    """Instantaneous power of idle, running and shut-down nodes."""

    def test_all_idle(self, platform: PlatformConfig) -> None:
        nodes = [Node(id=i, dvfs=platform.full_speed()) for i in range(8)]
        assert platform_power(platform, nodes, {}) == pytest.approx(8 * platform.node_idle_power)

    def test_shut_down_nodes_draw_nothing(self, platform: PlatformConfig) -> None:
        nodes = [Node(id=i, dvfs=platform.full_speed()) for i in range(8)]
        nodes[0].state = NodeState.SHUT_DOWN
        assert platform_power(platform, nodes, {}) == pytest.approx(7 * platform.node_idle_power)

    def test_running_nodes_charged_through_their_job(self, platform: PlatformConfig) -> None:
        nodes = [Node(id=i, dvfs=platform.full_speed()) for i in range(8)]
        for node in nodes[:2]:
            node.state = NodeState.RUNNING
            node.job_id = 3
        nodes[2].state = NodeState.SHUT_DOWN
        power = platform_power(platform, nodes, {3: 750.0})
        assert power == pytest.approx(5 * platform.node_idle_power + 750.0)

    def test_running_job_without_power_entry(self, platform: PlatformConfig) -> None:
        node = Node(id=0, state=NodeState.RUNNING, job_id=1, dvfs=platform.full_speed())
        with pytest.raises(KeyError):
            platform_power(platform, [node], {})

    def test_fits_under_cap_tolerance(self) -> None:
        assert fits_under_cap(1000.0, 1000.0)
        assert fits_under_cap(1000.0 + 1e-7, 1000.0)
        assert not fits_under_cap(1000.1, 1000.0)


class TestPowerCapSchedule:
    """Stepwise cap lookup, activity and release times."""

    def test_cap_before_first_entry_is_max(self) -> None:
        schedule = make_cap_schedule(1, 0.6, 12000.0)
        assert cap_at(schedule, 0.0) == 12000.0

    def test_cap_window_is_left_closed(self) -> None:
        schedule = make_cap_schedule(2, 0.6, 12000.0)
        assert schedule.cap_at(18 * 3600) == pytest.approx(7200.0)
        assert schedule.cap_at(20 * 3600 - 1) == pytest.approx(7200.0)
        assert schedule.cap_at(20 * 3600) == 12000.0
        assert schedule.cap_at(86400 + 19 * 3600) == pytest.approx(7200.0)

    def test_two_entries_per_day(self) -> None:
        assert len(make_cap_schedule(10, 0.5, 12000.0).entries) == 20

    def test_release_time(self) -> None:
        schedule = make_cap_schedule(1, 0.6, 12000.0)
        assert schedule.release_time(18 * 3600) == 20 * 3600
        assert math.isinf(schedule.release_time(20 * 3600))

    def test_full_cap_is_inactive(self) -> None:
        schedule = make_cap_schedule(1, 1.0, 12000.0)
        assert not schedule.is_active(schedule.cap_at(19 * 3600))
        assert schedule.is_active(11999.0)

    def test_entries_must_increase(self) -> None:
        with pytest.raises(ValidationError, match="E_INVALID_CAP_SCHEDULE"):
            PowerCapSchedule(
                entries=(CapEntry(time=10.0, cap=100.0), CapEntry(time=10.0, cap=200.0)),
                platform_max_power=12000.0,
            )

    @pytest.mark.parametrize("days,fraction", [(0, 0.5), (1, 0.0), (1, 1.5)])
    def test_invalid_shorthand(self, days: int, fraction: float) -> None:
        with pytest.raises(ValueError, match="E_INVALID_CAP_SCHEDULE"):
            make_cap_schedule(days, fraction, 12000.0)
