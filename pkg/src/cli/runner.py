"""Single-run execution and its output files."""

from collections.abc import Iterable
from pathlib import Path

import pandas as pd

from src.config.run_config import RunConfig
from src.metrics.records import RunMetrics
from src.schedulers.factory import create_scheduler
from src.sim.engine import RunOutputs, run
from src.utils.logging_config import get_logger
from src.workload.generator import assign_eco_flags, generate_stream
from src.workload.io import load_workload
from src.workload.profile import Job

logger = get_logger("ecosim.cli")

KEY_COLUMNS = ("scheduler", "eco_percent", "cap_fraction", "seed")
METRIC_COLUMNS = (
    "throughput",
    "mean_stretch",
    "kills_total",
    "kills_eco",
    "wasted_kills_J",
    "wasted_slowdown_J",
    "total_energy_J",
    "censored_count",
    "unreachable_cap",
)
SWEEP_COLUMNS = (*KEY_COLUMNS, *METRIC_COLUMNS, "status")

ENERGY_FORMAT = "{:.5e}"
REAL_FORMAT = "{:.4f}"


def build_workload(config: RunConfig) -> Iterable[Job]:
    """Jobs of a run: the seeded generator stream, or a workload file with redrawn eco flags."""
    if config.workload.generator is not None:
        return generate_stream(
            config.seed, config.horizon, config.eco_percent, config.workload.generator, config.platform
        )
    assert config.workload.path is not None
    jobs = load_workload(config.workload.path, config.platform)
    return assign_eco_flags(jobs, config.seed, config.eco_percent)


def execute_run(config: RunConfig) -> RunOutputs:
    """Simulate the run a configuration describes."""
    return run(
        config.platform,
        build_workload(config),
        config.schedule(),
        create_scheduler(config.scheduler),
        config.horizon,
        backlog_bound=config.workload.backlog_bound,
        sample_interval=config.sample_interval,
    )


def metrics_row(
    scheduler: str,
    eco_percent: float,
    cap_fraction: float | None,
    seed: int,
    metrics: RunMetrics | None,
) -> dict[str, str]:
    """One sweep-CSV row as preformatted strings; empty metric cells when the run failed."""
    row = {
        "scheduler": scheduler,
        "eco_percent": REAL_FORMAT.format(eco_percent),
        "cap_fraction": "" if cap_fraction is None else REAL_FORMAT.format(cap_fraction),
        "seed": str(seed),
    }
    if metrics is None:
        row.update({c: "" for c in METRIC_COLUMNS})
        row["status"] = "failed"
        return row
    row.update(
        {
            "throughput": REAL_FORMAT.format(metrics.throughput),
            "mean_stretch": "" if metrics.mean_stretch is None else REAL_FORMAT.format(metrics.mean_stretch),
            "kills_total": str(metrics.kills_total),
            "kills_eco": str(metrics.kills_eco),
            "wasted_kills_J": ENERGY_FORMAT.format(metrics.wasted_energy_kills),
            "wasted_slowdown_J": ENERGY_FORMAT.format(metrics.wasted_energy_slowdown),
            "total_energy_J": ENERGY_FORMAT.format(metrics.total_energy),
            "censored_count": str(metrics.censored_count),
            "unreachable_cap": "1" if metrics.unreachable_cap else "0",
            "status": "ok",
        }
    )
    return row


def write_rows(path: Path, rows: list[dict[str, str]]) -> None:
    """Write preformatted rows with the sweep header."""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(rows, columns=list(SWEEP_COLUMNS), dtype=str)
    frame.to_csv(path, index=False, lineterminator="\n")


def write_run_outputs(directory: Path, config: RunConfig, outputs: RunOutputs) -> None:
    """Write metrics.csv, jobs.jsonl, events.jsonl, power.csv and ledger.json."""
    directory.mkdir(parents=True, exist_ok=True)
    write_rows(
        directory / "metrics.csv",
        [
            metrics_row(
                config.scheduler.value,
                config.eco_percent,
                config.cap.cap_fraction,
                config.seed,
                outputs.metrics,
            )
        ],
    )
    with (directory / "jobs.jsonl").open("w") as f:
        for record in outputs.records:
            f.write(record.model_dump_json() + "\n")
    with (directory / "events.jsonl").open("w") as f:
        for entry in outputs.decisions:
            f.write(entry.model_dump_json(exclude_none=True) + "\n")
    power = pd.DataFrame([s.model_dump() for s in outputs.samples], columns=["time_s", "power_w", "cap_w"])
    power.to_csv(directory / "power.csv", index=False, float_format="%.4f", lineterminator="\n")
    (directory / "ledger.json").write_text(outputs.ledger.model_dump_json(indent=2) + "\n")
    logger.info(
        f"Run outputs written to {directory}",
        extra={"event_type": "outputs_written", "context": {"jobs": len(outputs.records)}},
    )
