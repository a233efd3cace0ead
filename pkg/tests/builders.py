"""Job and config builders shared by tests."""

import json
from pathlib import Path
from typing import Any

import numpy as np

from src.cluster.platform import PlatformConfig
from src.workload.generator import synth_profile
from src.workload.profile import Job

ONE_DAY = 86_400.0


def saturated_job(
    job_id: int,
    submit_time: float,
    windows: int,
    platform: PlatformConfig,
    eco: bool = False,
    nodes: int = 1,
) -> Job:
    """A job demanding full-speed capacity in every window."""
    profile = synth_profile(np.random.default_rng(0), nodes, windows, 1.0, platform, modulation=0.0)
    return Job(id=job_id, submit_time=submit_time, node_count=nodes, eco=eco, profile=profile)


def write_config(directory: Path, **overrides: Any) -> Path:
    """Write a one-day config (cap window included) with `overrides` applied at the top level."""
    document: dict[str, Any] = {
        "workload": {"generator": {}, "backlog_bound": 20},
        "cap": {"cap_fraction": 0.6},
        "scheduler": "eco",
        "eco_percent": 50.0,
        "seed": 1,
        "horizon": ONE_DAY,
        "output": {"directory": str(directory / "run")},
        "sweep": {
            "schedulers": ["killer", "eco"],
            "eco_percents": [0, 50],
            "cap_fractions": [0.6],
            "seeds": [1, 2],
        },
    }
    document.update(overrides)
    path = directory / "config.json"
    path.write_text(json.dumps(document, indent=2))
    return path
