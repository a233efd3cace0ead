"""Tests for kill ordering and the two scheduling policies."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.schedulers.actions import (
    Action,
    JobView,
    KillDecision,
    PowerProjection,
    SchedulerKind,
    SetDvfs,
)
from src.schedulers.eco_mode import EcoModeScheduler
from src.schedulers.factory import create_scheduler
from src.schedulers.killer import KillerScheduler
from src.schedulers.victims import kill_order, select_victims

MAX_STEP = 10
# Projected power of a saturated 1-node job at each of the 11 ladder points.
SATURATED = tuple(1500.0 * (0.5 + 0.05 * s) for s in range(MAX_STEP + 1))


def _view(job_id: int, start: float, eco: bool = False, step: int = MAX_STEP) -> JobView:
    return JobView(job_id=job_id, eco=eco, start_time=start, step=step, power_by_step=SATURATED)


def _projection(cap: float, *jobs: JobView, base: float = 0.0) -> PowerProjection:
    return PowerProjection(cap=cap, cap_active=cap < 12000.0, base_power=base, jobs=jobs, max_step=MAX_STEP)


class TestKillOrder:
    """Newest first; eco-mode protects EcoJobs."""

    def test_killer_order(self) -> None:
        jobs = [_view(0, 0.0), _view(1, 10.0, eco=True), _view(2, 20.0)]
        assert [j.job_id for j in kill_order(jobs, SchedulerKind.KILLER)] == [2, 1, 0]

    def test_eco_mode_order(self) -> None:
        jobs = [_view(0, 0.0), _view(1, 10.0, eco=True), _view(2, 20.0)]
        assert [j.job_id for j in kill_order(jobs, SchedulerKind.ECO_MODE)] == [2, 0, 1]

    def test_equal_start_higher_id_first(self) -> None:
        jobs = [_view(3, 5.0), _view(7, 5.0)]
        assert [j.job_id for j in kill_order(jobs, SchedulerKind.KILLER)] == [7, 3]


class TestSelectVictims:
    """Shortest prefix covering the deficit."""

    def test_no_deficit_no_victims(self) -> None:
        assert select_victims([_view(0, 0.0)], 0.0, SchedulerKind.KILLER) == KillDecision((), 0.0)

    def test_shortest_prefix(self) -> None:
        jobs = [_view(0, 0.0), _view(1, 10.0), _view(2, 20.0)]
        decision = select_victims(jobs, 1600.0, SchedulerKind.KILLER)
        assert decision.victims == (2, 1)
        assert not decision.unreachable

    def test_step_overrides_shrink_removed_power(self) -> None:
        decision = select_victims([_view(0, 0.0), _view(1, 1.0)], 1000.0, SchedulerKind.KILLER, steps={1: 0})
        assert decision.victims == (1, 0)

    def test_unreachable(self) -> None:
        decision = select_victims([_view(0, 0.0)], 5000.0, SchedulerKind.KILLER)
        assert decision.victims == (0,)
        assert decision.unreachable

    def test_empty_platform_with_deficit(self) -> None:
        assert select_victims([], 10.0, SchedulerKind.KILLER).unreachable


class TestKillerScheduler:
    """Baseline policy."""

    def test_cap_start_kills_newest(self) -> None:
        view = _projection(3600.0, _view(0, 0.0), _view(1, 20.0), _view(2, 40.0), base=1265.0)
        actions = KillerScheduler().on_cap_start(view)
        assert actions == [KillDecision(victims=(2, 1), deficit=pytest.approx(2165.0))]

    def test_cap_start_within_budget(self) -> None:
        assert KillerScheduler().on_cap_start(_projection(5000.0, _view(0, 0.0))) == []

    def test_admission_only_at_full_speed(self) -> None:
        view = _projection(2000.0, _view(0, 0.0), base=253.0)
        candidate = _view(9, 50.0, eco=True)
        assert KillerScheduler().admission_step(view, candidate, released_idle=253.0) is None
        assert KillerScheduler().admission_step(_projection(12000.0), candidate, 0.0) == MAX_STEP

    def test_cap_end_restores_slowed_jobs(self) -> None:
        view = _projection(12000.0, _view(0, 0.0, step=3), _view(1, 1.0))
        assert KillerScheduler().on_cap_end(view) == [SetDvfs(0, MAX_STEP)]


class TestEcoModeScheduler:
    """Slow EcoJobs first, kill non-eco jobs first, hand headroom back round robin."""

    def test_slowing_avoids_kills(self) -> None:
        view = _projection(2900.0, _view(0, 0.0, eco=True), _view(1, 1.0, eco=True))
        assert EcoModeScheduler().on_cap_start(view) == [SetDvfs(0, 9), SetDvfs(1, 9)]

    def test_only_net_changes_are_emitted(self) -> None:
        view = _projection(3000.0, _view(0, 0.0, eco=True), _view(1, 1.0, eco=True))
        assert EcoModeScheduler().on_cap_start(view) == []

    def test_round_robin_raise_oldest_first(self) -> None:
        # 2325 W for two jobs: both reach 0.75, then only the older one fits at 0.80.
        view = _projection(2325.0, _view(0, 0.0, eco=True), _view(1, 1.0, eco=True))
        actions = EcoModeScheduler().on_cap_start(view)
        assert actions == [SetDvfs(0, 6), SetDvfs(1, 5)]

    def test_kills_non_eco_before_eco(self) -> None:
        view = _projection(
            3600.0,
            _view(0, 0.0),
            _view(1, 20.0, eco=True),
            _view(2, 40.0),
            base=1265.0,
        )
        actions = EcoModeScheduler().on_cap_start(view)
        assert isinstance(actions[0], KillDecision)
        assert actions[0].victims == (2,)
        assert actions[1:] == [SetDvfs(1, 1)]

    def test_without_eco_jobs_matches_killer(self) -> None:
        view = _projection(3600.0, _view(0, 0.0), _view(1, 20.0), _view(2, 40.0), base=1265.0)
        assert EcoModeScheduler().on_cap_start(view) == KillerScheduler().on_cap_start(view)

    def test_admission_picks_highest_fitting_step(self) -> None:
        view = _projection(1000.0)
        candidate = _view(5, 0.0, eco=True)
        assert EcoModeScheduler().admission_step(view, candidate, 0.0) == 3

    def test_non_eco_admission_needs_full_speed(self) -> None:
        assert EcoModeScheduler().admission_step(_projection(1000.0), _view(5, 0.0), 0.0) is None

    def test_finished_job_frees_headroom(self) -> None:
        view = _projection(2000.0, _view(0, 0.0, eco=True, step=0))
        assert EcoModeScheduler().on_job_finished(view) == [SetDvfs(0, 10)]

    def test_finished_job_without_cap(self) -> None:
        view = _projection(12000.0, _view(0, 0.0, eco=True, step=0))
        assert EcoModeScheduler().on_job_finished(view) == []


class TestFactory:
    """Scheduler creation by name."""

    @pytest.mark.parametrize(
        "kind,expected", [("killer", KillerScheduler), ("eco", EcoModeScheduler)]
    )
    def test_known_kinds(self, kind: str, expected: type) -> None:
        assert isinstance(create_scheduler(kind), expected)

    def test_unknown_kind(self) -> None:
        with pytest.raises(ValueError, match="unknown scheduler"):
            create_scheduler("backfill")


@st.composite
def _cap_onsets(draw: st.DrawFn) -> PowerProjection:
    """Random running sets meeting a new cap; EcoJobs may already be slowed."""
    specs = draw(
        st.lists(
            st.tuples(st.booleans(), st.integers(0, 50), st.integers(300, 1500), st.integers(0, MAX_STEP)),
            max_size=8,
        )
    )
    jobs = tuple(
        JobView(
            job_id=i,
            eco=eco,
            start_time=float(start),
            step=step if eco else MAX_STEP,
            power_by_step=tuple(full * (0.5 + 0.05 * s) for s in range(MAX_STEP + 1)),
        )
        for i, (eco, start, full, step) in enumerate(specs)
    )
    jobs = tuple(sorted(jobs, key=lambda j: (j.start_time, j.job_id)))
    cap = float(draw(st.integers(0, 12_000)))
    base = float(draw(st.integers(0, 2_000)))
    return PowerProjection(cap=cap, cap_active=True, base_power=base, jobs=jobs, max_step=MAX_STEP)


def _outcome(view: PowerProjection, actions: list[Action]) -> tuple[set[int], dict[int, int], bool]:
    killed: set[int] = set()
    steps = {j.job_id: j.step for j in view.jobs}
    unreachable = False
    for action in actions:
        if isinstance(action, KillDecision):
            killed.update(action.victims)
            unreachable = unreachable or action.unreachable
        else:
            steps[action.job_id] = action.step
    return killed, steps, unreachable


def _key(job: JobView) -> tuple[float, int]:
    return (job.start_time, job.job_id)


class TestCapOnsetProperties:
    """Invariants of both policies over random running sets."""

    @given(_cap_onsets())
    def test_killer_kills_newest_first(self, view: PowerProjection) -> None:
        killed, _, _ = _outcome(view, KillerScheduler().on_cap_start(view))
        victims = [j for j in view.jobs if j.job_id in killed]
        survivors = [j for j in view.jobs if j.job_id not in killed]
        assert all(_key(s) < _key(v) for v in victims for s in survivors)

    @given(_cap_onsets())
    def test_eco_mode_spares_eco_jobs_while_non_eco_jobs_run(self, view: PowerProjection) -> None:
        killed, _, _ = _outcome(view, EcoModeScheduler().on_cap_start(view))
        if any(j.eco for j in view.jobs if j.job_id in killed):
            assert all(j.job_id in killed for j in view.jobs if not j.eco)

    @given(_cap_onsets(), st.sampled_from([KillerScheduler(), EcoModeScheduler()]))
    def test_projected_power_meets_cap_unless_unreachable(
        self, view: PowerProjection, scheduler: KillerScheduler | EcoModeScheduler
    ) -> None:
        killed, steps, unreachable = _outcome(view, scheduler.on_cap_start(view))
        if unreachable:
            assert killed == {j.job_id for j in view.jobs}
            assert view.base_power > view.cap * (1.0 - 1e-9)
            return
        assert view.total(steps, killed) <= view.cap * (1.0 + 1e-6) + 1e-6

    @given(_cap_onsets())
    def test_eco_mode_only_slows_eco_jobs(self, view: PowerProjection) -> None:
        _, steps, _ = _outcome(view, EcoModeScheduler().on_cap_start(view))
        assert all(steps[j.job_id] == MAX_STEP for j in view.jobs if not j.eco)
