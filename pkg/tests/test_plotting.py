"""Figure emission: every plot kind writes a graphic plus a numeric sidecar."""

import json

import numpy as np
import pytest

from slicerl import harness, plotting
from slicerl.plotting import moving_average, plot


def make_run_dir(root, name, algorithm, eval_scores, energy=5.0, n_episodes=4):
    d = root / name
    d.mkdir()
    (d / "run.json").write_text(json.dumps({"algorithm": algorithm, "seed": 1}))

    lines = [harness.METRICS_SCHEMA, ",".join(harness.METRICS_COLUMNS)]
    for ep in range(n_episodes):
        row = [(ep + 1) * 10, ep, 1.0, 0.1, energy, energy / 2, energy / 4,
               energy / 4, 0.5, 0, 0, 0.0, 0.0, 0.0, 0.0, 1.0]
        lines.append(",".join(str(v) for v in row))
    (d / "metrics.csv").write_text("\n".join(lines) + "\n")

    lines = [harness.EVAL_SCHEMA, "global_step,score"]
    lines += [f"{(i + 1) * 20},{s}" for i, s in enumerate(eval_scores)]
    (d / "eval.csv").write_text("\n".join(lines) + "\n")

    lines = [harness.TIMINGS_SCHEMA, "window_end_step,seconds"]
    lines += [f"{(i + 1) * 50},0.3" for i in range(3)]
    (d / "timings.csv").write_text("\n".join(lines) + "\n")
    return d


@pytest.mark.parametrize("kind", ["return", "energy", "energy_per_slice", "cpu"])
def test_plot_kinds_write_figure_and_sidecar(tmp_path, kind):
    r1 = make_run_dir(tmp_path, "a", "tdsac", [1.0, 2.0, 3.0])
    r2 = make_run_dir(tmp_path, "b", "tdsac", [2.0, 3.0, 4.0])
    out = plot([r1, r2], kind, tmp_path / f"{kind}.svg")
    assert out.exists()
    sidecar = out.with_suffix(".csv")
    assert sidecar.exists()
    assert "algorithm,metric,global_step,mean,std" in sidecar.read_text()


def test_plot_band_collapses_for_identical_seeds(tmp_path):
    r1 = make_run_dir(tmp_path, "a", "tdsac", [2.0, 2.0, 2.0])
    r2 = make_run_dir(tmp_path, "b", "tdsac", [2.0, 2.0, 2.0])
    out = plot([r1, r2], "return", tmp_path / "ret.svg")
    rows = out.with_suffix(".csv").read_text().splitlines()[1:]
    for row in rows:
        _, _, _, mean, std = row.split(",")
        assert float(mean) == 2.0
        assert float(std) == 0.0


def test_plot_groups_multiple_algorithms(tmp_path):
    r1 = make_run_dir(tmp_path, "a", "tdsac", [1.0, 2.0])
    r2 = make_run_dir(tmp_path, "b", "ddpg", [0.5, 0.7])
    out = plot([r1, r2], "return", tmp_path / "cmp.svg")
    text = out.with_suffix(".csv").read_text()
    assert "tdsac" in text and "ddpg" in text


def test_plot_resamples_mismatched_grids_with_warning(tmp_path):
    r1 = make_run_dir(tmp_path, "a", "tdsac", [1.0, 2.0, 3.0, 4.0])
    r2 = make_run_dir(tmp_path, "b", "tdsac", [1.0, 2.0])
    with pytest.warns(UserWarning):
        plot([r1, r2], "return", tmp_path / "ret.svg")


def test_wallclock_plot(tmp_path):
    r1 = make_run_dir(tmp_path, "a", "tdsac", [1.0])
    r2 = make_run_dir(tmp_path, "b", "ddpg", [1.0])
    out = plot([r1, r2], "wallclock", tmp_path / "wc.svg")
    assert out.exists()
    assert "mean_seconds_per_window" in out.with_suffix(".csv").read_text()


def test_plot_rejects_unknown_kind(tmp_path):
    with pytest.raises(ValueError):
        plot([], "speedup", tmp_path / "x.svg")


def test_moving_average():
    v = np.array([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(moving_average(v, 1), v)
    assert len(moving_average(v, 2)) == len(v)
    smoothed = moving_average(np.ones(10), 5)
    np.testing.assert_allclose(smoothed[2:-2], 1.0)
    assert plotting.KINDS == ("return", "energy", "energy_per_slice", "cpu", "wallclock")
