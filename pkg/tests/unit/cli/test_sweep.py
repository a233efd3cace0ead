"""Tests for sweep cell failure handling."""

from pathlib import Path

import pandas as pd
import pytest

import src.cli.sweep as sweep_module
from src.cli.main import EXIT_SWEEP_FAILURES, main
from src.cli.sweep import SweepCell, run_cell
from src.config.run_config import RunConfig
from src.domain.errors import E_RUN_FAILED, E_WORKLOAD_FORMAT, WorkloadError
from src.domain.result import MAX_ERROR_MESSAGE_LENGTH
from src.schedulers.actions import SchedulerKind
from tests.builders import write_config


def _raise(error: Exception):  # type: ignore[no-untyped-def]
    def execute(config):  # type: ignore[no-untyped-def]
        raise error

    return execute


class TestRunCell:
    """Failures are captured in the cell result."""

    CELL = SweepCell(SchedulerKind.KILLER, 0.0, 0.6, 1)

    def test_long_error_message_is_truncated(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(
            sweep_module, "execute_run", _raise(WorkloadError("bad job " * 1000, E_WORKLOAD_FORMAT))
        )
        result = run_cell(RunConfig(), self.CELL)
        assert not result.success
        assert result.error_code == E_WORKLOAD_FORMAT
        assert result.error_message is not None
        assert len(result.error_message) == MAX_ERROR_MESSAGE_LENGTH

    def test_unexpected_exception_fails_the_cell(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(sweep_module, "execute_run", _raise(KeyError("node")))
        result = run_cell(RunConfig(), self.CELL)
        assert not result.success
        assert result.error_code == E_RUN_FAILED
        assert result.metadata == self.CELL.metadata()

    def test_empty_message_falls_back_to_type_name(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(sweep_module, "execute_run", _raise(RuntimeError()))
        assert run_cell(RunConfig(), self.CELL).error_message == "RuntimeError"


class TestSweepWithFailures:
    """A failing cell yields a failed row, not an aborted sweep."""

    def test_long_error_gives_failed_row_and_exit_1(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        real = sweep_module.execute_run

        def execute(config):  # type: ignore[no-untyped-def]
            if config.seed == 2:
                raise WorkloadError("job 7: ragged profile; " * 400, E_WORKLOAD_FORMAT)
            return real(config)

        monkeypatch.setattr(sweep_module, "execute_run", execute)
        config_path = write_config(
            tmp_path,
            sweep={"schedulers": ["killer"], "eco_percents": [0], "cap_fractions": [0.6], "seeds": [1, 2]},
        )
        out = tmp_path / "sweep"

        code = main(["sweep", "--config", str(config_path), "--out", str(out), "--workers", "1"])

        assert code == EXIT_SWEEP_FAILURES
        frame = pd.read_csv(out / "sweep.csv")
        assert list(frame["status"]) == ["ok", "failed"]
        assert pd.isna(frame.loc[1, "throughput"])
