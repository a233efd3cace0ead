"""Per-cell summaries of a sweep CSV."""

from pathlib import Path

import numpy as np
import pandas as pd

from src.cli.runner import METRIC_COLUMNS

GROUP_COLUMNS = ["scheduler", "eco_percent", "cap_fraction"]
Z_95 = 1.96


def summarize(sweep_csv: Path) -> pd.DataFrame:
    """Mean and 95% half-width of every metric per (scheduler, eco_percent, cap_fraction).

    Failed rows are dropped. `kill_reduction` compares mean kills with the eco 0% cell of
    the same scheduler and cap (1 - kills / kills_at_eco_0; empty when that baseline has
    no kills).

    Returns:
        One row per cell, sorted by the group columns
    """
    frame = pd.read_csv(sweep_csv)
    frame = frame[frame["status"] == "ok"]
    metrics = [c for c in METRIC_COLUMNS if c != "unreachable_cap"]
    grouped = frame.groupby(GROUP_COLUMNS, sort=True)[metrics]
    means = grouped.mean().add_suffix("_mean")
    half_width = (Z_95 * grouped.std(ddof=1) / np.sqrt(grouped.count())).fillna(0.0).add_suffix("_ci95")
    summary = pd.concat([means, half_width], axis=1)
    summary["runs"] = grouped.size()

    level = summary.index.get_level_values
    if 0.0 in set(level("eco_percent")):
        baseline = summary.xs(0.0, level="eco_percent")["kills_total_mean"]
    else:
        baseline = pd.Series(dtype=float)
    keys = pd.MultiIndex.from_arrays([level("scheduler"), level("cap_fraction")])
    base_kills = baseline.reindex(keys).to_numpy()
    with np.errstate(divide="ignore", invalid="ignore"):
        reduction = 1.0 - summary["kills_total_mean"].to_numpy() / base_kills
    summary["kill_reduction"] = np.where(base_kills > 0, reduction, np.nan)
    return summary.reset_index()


def write_summary(sweep_csv: Path, out_path: Path) -> pd.DataFrame:
    summary = summarize(sweep_csv)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    summary.to_csv(out_path, index=False, float_format="%.6g", lineterminator="\n")
    return summary
