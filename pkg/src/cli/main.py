"""ecosim command line.

Subcommands: run, sweep, thresholds, ingest, generate, summarize.

Exit codes: 0 success, 1 sweep finished with failed cells, 2 configuration or input
error, 3 simulation invariant violation (state dump on stderr).
"""

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path

from src.cli.runner import execute_run, write_run_outputs
from src.cli.summarize import write_summary
from src.cli.sweep import resolve_workers, run_sweep
from src.cluster.platform import PlatformConfig
from src.config.loader import load_run_config
from src.config.settings import get_settings
from src.domain.errors import ConfigError, EcoSimError, SimulationInvariantError
from src.metrics.thresholds import brute_force_thresholds, feasibility_thresholds
from src.schedulers.actions import SchedulerKind
from src.utils.logging_config import setup_logging
from src.workload.generator import generate_stream
from src.workload.io import job_to_model, save_workload
from src.workload.trace_ingest import DEFAULT_MAX_GAP, ingest

EXIT_OK = 0
EXIT_SWEEP_FAILURES = 1
EXIT_INPUT_ERROR = 2
EXIT_INVARIANT = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecosim", description="Power-capped HPC cluster simulator (FCFS killer vs eco-mode)."
    )
    parser.add_argument("--log-level", default=None, help="Override ECOSIM_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Simulate one run and write its outputs")
    p_run.add_argument("--config", type=Path, default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--scheduler", choices=[k.value for k in SchedulerKind], default=None)
    p_run.add_argument("--eco-percent", type=float, default=None)
    p_run.add_argument("--cap-fraction", type=float, default=None)
    p_run.add_argument("--out", type=Path, default=None, help="Output directory (overrides config)")

    p_sweep = sub.add_parser("sweep", help="Run the parameter grid of the config's sweep section")
    p_sweep.add_argument("--config", type=Path, default=None)
    p_sweep.add_argument("--out", type=Path, required=True)
    p_sweep.add_argument("--workers", type=int, default=None)

    p_thr = sub.add_parser("thresholds", help="Print feasibility thresholds as JSON")
    p_thr.add_argument("--config", type=Path, default=None)
    p_thr.add_argument("--no-brute-force", action="store_true", help="Skip the simulation cross-check")

    p_ing = sub.add_parser("ingest", help="Convert a job table and power samples to a workload file")
    p_ing.add_argument("--jobs", type=Path, required=True)
    p_ing.add_argument("--power", type=Path, required=True)
    p_ing.add_argument("--out", type=Path, required=True)
    p_ing.add_argument("--config", type=Path, default=None, help="Platform taken from this config")
    p_ing.add_argument("--max-gap", type=float, default=DEFAULT_MAX_GAP)

    p_gen = sub.add_parser("generate", help="Export the seeded synthetic workload as a workload file")
    p_gen.add_argument("--config", type=Path, default=None)
    p_gen.add_argument("--out", type=Path, required=True)
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--eco-percent", type=float, default=None)

    p_sum = sub.add_parser("summarize", help="Per-cell means and confidence intervals of a sweep")
    p_sum.add_argument("--sweep", type=Path, required=True)
    p_sum.add_argument("--out", type=Path, required=True)
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_run_config(args.config).with_overrides(
        seed=args.seed,
        scheduler=args.scheduler,
        eco_percent=args.eco_percent,
        cap_fraction=args.cap_fraction,
    )
    outputs = execute_run(config)
    write_run_outputs(args.out or config.output.directory, config, outputs)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = load_run_config(args.config)
    workers = resolve_workers(args.workers, get_settings().workers)
    summary = run_sweep(config, args.out, workers)
    return EXIT_SWEEP_FAILURES if summary.failed else EXIT_OK


def _cmd_thresholds(args: argparse.Namespace) -> int:
    platform = load_run_config(args.config).platform
    analytic = feasibility_thresholds(platform)
    report: dict[str, object] = {"analytic": analytic.model_dump()}
    if not args.no_brute_force:
        brute = brute_force_thresholds(platform)
        report["brute_force"] = brute.model_dump()
        report["match"] = brute == analytic
    print(json.dumps(report, indent=2))
    return EXIT_OK


def _cmd_ingest(args: argparse.Namespace) -> int:
    platform = load_run_config(args.config).platform if args.config else PlatformConfig()
    ingest(args.jobs, args.power, args.out, platform, args.max_gap)
    return EXIT_OK


def _cmd_generate(args: argparse.Namespace) -> int:
    config = load_run_config(args.config).with_overrides(seed=args.seed, eco_percent=args.eco_percent)
    params = config.workload.generator
    if params is None:
        raise ConfigError("generate needs a 'workload.generator' section", diagnostics=[("workload", "no generator")])
    jobs = generate_stream(config.seed, config.horizon, config.eco_percent, params, config.platform)
    save_workload(args.out, (job_to_model(job) for job in jobs))
    return EXIT_OK


def _cmd_summarize(args: argparse.Namespace) -> int:
    write_summary(args.sweep, args.out)
    return EXIT_OK


COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "thresholds": _cmd_thresholds,
    "ingest": _cmd_ingest,
    "generate": _cmd_generate,
    "summarize": _cmd_summarize,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the `ecosim` console script."""
    args = build_parser().parse_args(argv)
    settings = get_settings()
    setup_logging(
        log_level=args.log_level or settings.log_level,
        log_file=settings.log_file,
        enable_file_logging=settings.log_file is not None,
    )
    try:
        return COMMANDS[args.command](args)
    except SimulationInvariantError as e:
        print(f"error: {e}", file=sys.stderr)
        print(json.dumps(e.state_dump, indent=2, default=str), file=sys.stderr)
        return EXIT_INVARIANT
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        for location, message in e.diagnostics:
            print(f"  {location}: {message}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (EcoSimError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
