"""Result quantities computed from job records."""

from collections.abc import Sequence

from src.metrics.records import EnergyLedger, JobOutcome, JobRecord, RunMetrics

SECONDS_PER_HOUR = 3600.0


def throughput(records: Sequence[JobRecord], horizon: float) -> float:
    """Completed jobs per hour over the horizon.

    Raises:
        ValueError: If horizon is not positive
    """
    if horizon <= 0.0:
        raise ValueError(f"horizon must be > 0, got {horizon}")
    completed = sum(1 for r in records if r.outcome is JobOutcome.COMPLETED)
    return completed / (horizon / SECONDS_PER_HOUR)


def mean_stretch(records: Sequence[JobRecord]) -> float | None:
    """Mean (finish - submit) / full-speed runtime over completed jobs; None if there are none."""
    stretches = [s for r in records if (s := r.stretch) is not None]
    if not stretches:
        return None
    return sum(stretches) / len(stretches)


def wasted_energy(records: Sequence[JobRecord]) -> tuple[float, float]:
    """Energy lost to kills and to slowdowns, in joules.

    Returns:
        (all energy of killed jobs, sum over slowed completed jobs of energy above the
        full-speed equivalent)
    """
    kills = sum(r.energy_consumed for r in records if r.outcome is JobOutcome.KILLED)
    slowdown = sum(
        max(r.energy_consumed - r.energy_full_speed_equiv, 0.0)
        for r in records
        if r.outcome is JobOutcome.COMPLETED and r.slowed
    )
    return kills, slowdown


def compute_run_metrics(
    records: Sequence[JobRecord],
    ledger: EnergyLedger,
    horizon: float,
    unreachable_cap: bool = False,
) -> RunMetrics:
    """Aggregate one run's records into RunMetrics."""
    kills, slowdown = wasted_energy(records)
    killed = [r for r in records if r.outcome is JobOutcome.KILLED]
    return RunMetrics(
        throughput=throughput(records, horizon),
        mean_stretch=mean_stretch(records),
        kills_total=len(killed),
        kills_eco=sum(1 for r in killed if r.eco),
        wasted_energy_kills=kills,
        wasted_energy_slowdown=slowdown,
        total_energy=ledger.total,
        censored_count=sum(1 for r in records if r.outcome is JobOutcome.CENSORED),
        unreachable_cap=unreachable_cap,
    )
