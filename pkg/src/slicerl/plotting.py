"""Learning-curve and cost figures: mean line, +/-1 std band across seeds,
written as vector graphics with a delimited sidecar of the plotted numbers.
"""

from __future__ import annotations

import json
import logging
import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import harness

log = logging.getLogger(__name__)

KINDS = ("return", "energy", "energy_per_slice", "cpu", "wallclock")

_KIND_COLUMNS = {
    "return": [("eval.csv", "score", "evaluation score")],
    "energy": [("metrics.csv", "energy_total_w", "network energy [W]")],
    "cpu": [("metrics.csv", "cpu_utilization", "CPU utilization")],
    "energy_per_slice": [
        ("metrics.csv", "energy_slice_a", "slice A energy [W]"),
        ("metrics.csv", "energy_slice_b", "slice B energy [W]"),
        ("metrics.csv", "energy_slice_c", "slice C energy [W]"),
    ],
}


def _load_series(run_dir: Path, filename: str, column: str):
    header, rows = harness.read_table(run_dir / filename)
    ci = header.index(column)
    si = header.index("global_step") if "global_step" in header else 0
    steps = np.array([r[si] for r in rows])
    values = np.array([r[ci] for r in rows])
    return steps, values


def moving_average(values: np.ndarray, window: int) -> np.ndarray:
    if window <= 1 or len(values) == 0:
        return values
    kernel = np.ones(min(window, len(values))) / min(window, len(values))
    return np.convolve(values, kernel, mode="same")


def _group_runs(run_dirs):
    groups: dict[str, list[Path]] = {}
    for d in run_dirs:
        d = Path(d)
        meta = json.loads((d / "run.json").read_text())
        groups.setdefault(meta["algorithm"], []).append(d)
    return groups


def _aligned_stats(series, window: int):
    """Resample every (steps, values) pair onto the coarsest step grid."""
    if len({len(s) for s, _ in series}) > 1 or any(
        not np.array_equal(series[0][0], s) for s, _ in series[1:]
    ):
        warnings.warn("step grids differ across runs; resampling to the coarsest")
    grid = min((s for s, _ in series), key=len)
    resampled = np.stack([np.interp(grid, s, v) for s, v in series])
    smoothed = np.stack([moving_average(row, window) for row in resampled])
    return grid, smoothed.mean(axis=0), smoothed.std(axis=0)


def plot(run_dirs, kind: str, out_file, window: int = 1) -> Path:
    """Render one comparison figure plus its numeric sidecar (.csv)."""
    if kind not in KINDS:
        raise ValueError(f"unknown plot kind {kind!r}; pick one of {KINDS}")
    out_file = Path(out_file)
    if kind == "wallclock":
        return _plot_wallclock(run_dirs, out_file)

    groups = _group_runs(run_dirs)
    panels = _KIND_COLUMNS[kind]
    fig, axes = plt.subplots(1, len(panels), figsize=(5.0 * len(panels), 3.6), squeeze=False)
    sidecar_rows = []
    for ax, (filename, column, label) in zip(axes[0], panels):
        for alg, dirs in sorted(groups.items()):
            series = [_load_series(d, filename, column) for d in dirs]
            series = [s for s in series if len(s[0])]
            if not series:
                continue
            grid, mean, std = _aligned_stats(series, window)
            ax.plot(grid, mean, label=alg.upper())
            ax.fill_between(grid, mean - std, mean + std, alpha=0.25)
            sidecar_rows.extend(
                (alg, column, int(g), m, s) for g, m, s in zip(grid, mean, std)
            )
        ax.set_xlabel("environment steps")
        ax.set_ylabel(label)
        ax.legend()
    fig.tight_layout()
    fig.savefig(out_file)
    plt.close(fig)

    sidecar = out_file.with_suffix(".csv")
    with open(sidecar, "w", encoding="utf-8") as fh:
        fh.write("algorithm,metric,global_step,mean,std\n")
        for alg, col, g, m, s in sidecar_rows:
            fh.write(f"{alg},{col},{g},{m:.17g},{s:.17g}\n")
    log.info("wrote %s and %s", out_file, sidecar)
    return out_file


def _plot_wallclock(run_dirs, out_file: Path) -> Path:
    report = harness.report_wallclock(run_dirs)
    fig, ax = plt.subplots(figsize=(5, 3.6))
    algs = sorted(report, key=report.get)
    ax.bar(range(len(algs)), [report[a] for a in algs])
    ax.set_xticks(range(len(algs)), [a.upper() for a in algs])
    ax.set_ylabel("mean seconds per training window")
    fig.tight_layout()
    fig.savefig(out_file)
    plt.close(fig)
    with open(out_file.with_suffix(".csv"), "w", encoding="utf-8") as fh:
        fh.write("algorithm,mean_seconds_per_window\n")
        for a in algs:
            fh.write(f"{a},{report[a]:.17g}\n")
    return out_file
