"""Run metrics: job records, energy ledger, throughput, stretch and wasted energy.

Feasibility thresholds live in `src.metrics.thresholds`, which drives the engine and is
therefore not imported here.
"""

from .compute import compute_run_metrics, mean_stretch, throughput, wasted_energy
from .records import EnergyLedger, JobOutcome, JobRecord, RunMetrics

__all__ = [
    "EnergyLedger",
    "JobOutcome",
    "JobRecord",
    "RunMetrics",
    "compute_run_metrics",
    "mean_stretch",
    "throughput",
    "wasted_energy",
]
