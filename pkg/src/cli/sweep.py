"""Parameter sweeps over (scheduler, eco_percent, cap_fraction, seed).

Cells run in a process pool. Each finished cell is stored under `runs/` in the output
directory; a rerun skips cells already stored as successful, so an interrupted sweep
resumes and ends with the same CSV.
"""

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path

from pydantic import ValidationError

from src.cli.runner import execute_run, metrics_row, write_rows
from src.config.run_config import RunConfig
from src.domain.errors import E_RUN_FAILED, EcoSimError
from src.domain.result import RunResult
from src.metrics.records import RunMetrics
from src.schedulers.actions import SchedulerKind
from src.utils.logging_config import get_logger

logger = get_logger("ecosim.sweep")

SWEEP_CSV = "sweep.csv"
RUNS_DIR = "runs"


@dataclass(frozen=True, slots=True)
class SweepCell:
    """One point of the sweep grid."""

    scheduler: SchedulerKind
    eco_percent: float
    cap_fraction: float
    seed: int

    @property
    def filename(self) -> str:
        return f"{self.scheduler.value}_{self.eco_percent:g}_{self.cap_fraction:g}_{self.seed}.json"

    def metadata(self) -> dict[str, object]:
        return {
            "scheduler": self.scheduler.value,
            "eco_percent": self.eco_percent,
            "cap_fraction": self.cap_fraction,
            "seed": self.seed,
        }


@dataclass(frozen=True, slots=True)
class SweepSummary:
    """Where the sweep CSV went and how many cells failed."""

    csv_path: Path
    cells: int
    failed: int


def run_cell(base: RunConfig, cell: SweepCell) -> RunResult[RunMetrics]:
    """Run one cell; failures are captured in the result instead of raised."""
    started = time.perf_counter()
    try:
        config = base.with_overrides(
            seed=cell.seed,
            scheduler=cell.scheduler,
            eco_percent=cell.eco_percent,
            cap_fraction=cell.cap_fraction,
        )
        outputs = execute_run(config)
        elapsed = (time.perf_counter() - started) * 1000
        return RunResult[RunMetrics].succeeded(outputs.metrics, elapsed, cell.metadata())
    except EcoSimError as e:
        code = e.code
        message = str(e) or type(e).__name__
    except Exception as e:
        # Unexpected errors fail only this cell
        logger.exception(
            f"Cell {cell.filename} raised {type(e).__name__}",
            extra={"event_type": "cell_crash", "context": cell.metadata()},
        )
        code = E_RUN_FAILED
        message = str(e) or type(e).__name__
    elapsed = (time.perf_counter() - started) * 1000
    return RunResult[RunMetrics].failed(message, elapsed, code, cell.metadata())


def run_cell_json(base: RunConfig, cell: SweepCell) -> str:
    """run_cell serialised for transfer out of a worker process."""
    return run_cell(base, cell).model_dump_json()


def _load_stored(path: Path) -> RunResult[RunMetrics] | None:
    if not path.exists():
        return None
    try:
        return RunResult[RunMetrics].model_validate_json(path.read_text())
    except ValidationError:
        logger.warning(f"Ignoring unreadable cell file {path}")
        return None


def resolve_workers(requested: int | None, env_workers: int | None) -> int:
    """--workers, else ECOSIM_WORKERS, else the CPU count."""
    return requested or env_workers or os.cpu_count() or 1


def run_sweep(base: RunConfig, out_dir: Path, workers: int = 1) -> SweepSummary:
    """Run every cell of `base.sweep` and write the canonical sweep CSV.

    Args:
        base: Configuration every cell starts from
        out_dir: Output directory (sweep.csv and runs/)
        workers: Worker processes (1 runs inline)

    Returns:
        SweepSummary with the CSV path and failure count
    """
    runs_dir = out_dir / RUNS_DIR
    runs_dir.mkdir(parents=True, exist_ok=True)
    cells = [SweepCell(*c) for c in base.sweep.cells()]

    results: dict[SweepCell, RunResult[RunMetrics]] = {}
    pending: list[SweepCell] = []
    for cell in cells:
        stored = _load_stored(runs_dir / cell.filename)
        if stored is not None and stored.success:
            results[cell] = stored
        else:
            pending.append(cell)
    logger.info(
        f"Sweep: {len(cells)} cells, {len(results)} already done, {len(pending)} to run",
        extra={"event_type": "sweep_start", "context": {"workers": workers}},
    )

    if workers <= 1:
        for cell in pending:
            _store(runs_dir, cell, run_cell(base, cell), results)
    else:
        worker = partial(run_cell_json, base)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for cell, payload in zip(pending, pool.map(worker, pending), strict=True):
                _store(runs_dir, cell, RunResult[RunMetrics].model_validate_json(payload), results)

    rows = [
        metrics_row(
            cell.scheduler.value,
            cell.eco_percent,
            cell.cap_fraction,
            cell.seed,
            results[cell].data if results[cell].success else None,
        )
        for cell in cells
    ]
    csv_path = out_dir / SWEEP_CSV
    write_rows(csv_path, rows)
    failed = sum(1 for cell in cells if not results[cell].success)
    logger.info(
        f"Sweep written to {csv_path}",
        extra={"event_type": "sweep_end", "context": {"cells": len(cells), "failed": failed}},
    )
    return SweepSummary(csv_path=csv_path, cells=len(cells), failed=failed)


def _store(
    runs_dir: Path,
    cell: SweepCell,
    result: RunResult[RunMetrics],
    results: dict[SweepCell, RunResult[RunMetrics]],
) -> None:
    results[cell] = result
    (runs_dir / cell.filename).write_text(result.model_dump_json() + "\n")
    if not result.success:
        logger.error(
            f"Cell {cell.filename} failed",
            extra={"error": {"code": result.error_code, "message": result.error_message}},
        )
