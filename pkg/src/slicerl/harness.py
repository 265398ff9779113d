"""Training orchestration: the outer loop, evaluation protocol, metrics
persistence and checkpointing.

Layout of a run directory:
    run.json          algorithm/seed/config echo
    metrics.csv       one row per training episode (deterministic)
    eval.csv          one row per periodic evaluation (deterministic)
    timings.csv       wall-clock seconds per training-step window
    trajectory.csv    optional per-step dump
    checkpoints/      light per-evaluation bundles + latest.zip (full)
"""

from __future__ import annotations

import json
import logging
import time
from pathlib import Path

import numpy as np

from . import checkpoint as ckpt
from .agents import ReplayBuffer, make_agent
from .config import RunConfig, config_to_text, load_config_text
from .env import SliceEnv

log = logging.getLogger(__name__)

METRICS_SCHEMA = "# slicerl-metrics v1"
EVAL_SCHEMA = "# slicerl-eval v1"
TIMINGS_SCHEMA = "# slicerl-timings v1"

METRICS_COLUMNS = [
    "global_step", "episode", "episode_return", "mean_reward",
    "energy_total_w", "energy_slice_a", "energy_slice_b", "energy_slice_c",
    "cpu_utilization", "sinr_violations", "cpu_violations",
    "j_q1", "j_q2", "j_pi", "j_alpha", "alpha",
]


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def best_of_mean(returns, best: int) -> float:
    """Mean of the top `best` episode returns."""
    if best < 1 or best > len(returns):
        raise ValueError("best must be in [1, len(returns)]")
    ordered = sorted(returns, reverse=True)
    return float(np.mean(ordered[:best]))


def run_episode(env: SliceEnv, policy, seed: int | None = None) -> float:
    """Roll one fixed-horizon episode under `policy(obs) -> action`."""
    obs = env.reset(seed)
    total = 0.0
    done = False
    while not done:
        out = env.step(policy(obs))
        total += out.reward
        obs = out.observation
        done = out.done
    return total


def evaluate(agent, config: RunConfig, episodes: int | None = None,
             best: int | None = None, base_seed: int = 0) -> float:
    """Deterministic-policy score: average return over the best episodes.

    Fresh environments are used throughout; the replay buffer and the agent
    parameters are never touched.
    """
    episodes = episodes if episodes is not None else config.eval_episodes
    best = best if best is not None else config.eval_best
    returns = []
    for ep in range(episodes):
        env = SliceEnv(config.env)
        returns.append(
            run_episode(env, lambda s: agent.select_action(s, mode="eval"),
                        seed=base_seed + ep)
        )
    return best_of_mean(returns, best)


def evaluate_random(config: RunConfig, episodes: int | None = None,
                    best: int | None = None, base_seed: int = 0) -> float:
    """Uniform-random-policy baseline under the same protocol."""
    episodes = episodes if episodes is not None else config.eval_episodes
    best = best if best is not None else config.eval_best
    returns = []
    for ep in range(episodes):
        env = SliceEnv(config.env)
        rng = np.random.default_rng(base_seed + 10_000 + ep)
        returns.append(run_episode(env, lambda s: env.random_action(rng), seed=base_seed + ep))
    return best_of_mean(returns, best)


class _EpisodeStats:
    """Accumulates per-step info into one metrics row."""

    FIELDS = ["reward", "energy", "ea", "eb", "ec", "util", "sv", "cv",
              "j_q1", "j_q2", "j_pi", "j_alpha", "alpha", "steps", "updates"]

    def __init__(self, state: dict | None = None):
        self.s = dict(state) if state else {f: 0.0 for f in self.FIELDS}

    def add_step(self, outcome) -> None:
        info = outcome.info
        self.s["reward"] += outcome.reward
        self.s["energy"] += info["breakdown"].total_w
        pse = info["per_slice_energy_w"]
        for key, idx in (("ea", 0), ("eb", 1), ("ec", 2)):
            if idx < len(pse):
                self.s[key] += pse[idx]
        self.s["util"] += info["cpu_utilization"]
        self.s["sv"] += info["sinr_violations"]
        self.s["cv"] += info["cpu_violations"]
        self.s["steps"] += 1

    def add_diag(self, diag: dict) -> None:
        for key in ("j_q1", "j_q2", "j_pi", "j_alpha", "alpha"):
            v = diag.get(key, float("nan"))
            if not np.isnan(v):
                self.s[key] += v
        self.s["updates"] += 1

    def row(self, global_step: int, episode: int) -> list:
        n = max(self.s["steps"], 1)
        u = max(self.s["updates"], 1)
        return [
            global_step, episode,
            self.s["reward"], self.s["reward"] / n,
            self.s["energy"] / n, self.s["ea"] / n, self.s["eb"] / n, self.s["ec"] / n,
            self.s["util"] / n, int(self.s["sv"]), int(self.s["cv"]),
            self.s["j_q1"] / u, self.s["j_q2"] / u, self.s["j_pi"] / u,
            self.s["j_alpha"] / u, self.s["alpha"] / u,
        ]


def _append(path: Path, line: str) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(line + "\n")


def _init_file(path: Path, schema: str, columns) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(schema + "\n")
        fh.write(",".join(columns) + "\n")


def train(config: RunConfig | None, out_dir, seed: int | None = None,
          resume=None) -> Path:
    """Run (or resume) one training run; returns the run directory.

    When resuming, the checkpoint's embedded config is used unless the
    caller passes one explicitly (e.g. to extend the step budget).
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "checkpoints").mkdir(exist_ok=True)
        probe = out / ".writable"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise RuntimeError(f"output directory {out} is not writable: {exc}") from exc

    if config is None:
        if resume is None:
            raise ValueError("need a config, a checkpoint to resume, or both")
    else:
        seed = config.seed if seed is None else seed
        cfg_text = config_to_text(config)
        env = SliceEnv(config.env)
        obs_dim, act_dim = env.observation_dim, env.action_dim

    if resume is None:
        agent = make_agent(config.algorithm, obs_dim, act_dim, config.agent, seed=seed + 1)
        buffer = ReplayBuffer(config.buffer_size, obs_dim, act_dim, seed=seed + 2)
        warmup_rng = np.random.default_rng(seed + 3)
        obs = env.reset(seed)
        loop = {
            "t": 0,
            "episode": 0,
            "obs": obs.tolist(),
            "stats": None,
            "episode_start_step": 0,
        }
        (out / "run.json").write_text(json.dumps({
            "algorithm": config.algorithm,
            "seed": seed,
            "config": cfg_text,
        }, indent=2))
        _init_file(out / "metrics.csv", METRICS_SCHEMA, METRICS_COLUMNS)
        _init_file(out / "eval.csv", EVAL_SCHEMA, ["global_step", "score"])
        _init_file(out / "timings.csv", TIMINGS_SCHEMA, ["window_end_step", "seconds"])
        if config.trajectory:
            traj_cols = (["step"] + [f"obs{i}" for i in range(obs_dim)]
                         + [f"act{i}" for i in range(act_dim)]
                         + ["reward", "energy_w", "cpu_demand", "violations"])
            _init_file(out / "trajectory.csv", "# slicerl-trajectory v1", traj_cols)
    else:
        bundle = ckpt.load_checkpoint(resume)
        if config is None:
            config = load_config_text(bundle["manifest"]["config_text"])
            cfg_text = bundle["manifest"]["config_text"]
        else:
            cfg_text = config_to_text(config)
        env = SliceEnv(config.env)
        obs_dim, act_dim = env.observation_dim, env.action_dim
        snap = ckpt.restore_env_snapshot(bundle)
        if snap is None:
            raise RuntimeError("checkpoint lacks an environment snapshot; cannot resume")
        env.restore(snap)
        agent = ckpt.restore_agent(bundle, obs_dim, act_dim, config.agent)
        buffer = ckpt.restore_buffer(bundle, obs_dim, act_dim)
        if buffer is None:
            raise RuntimeError("checkpoint lacks the replay buffer; cannot resume")
        loop = dict(bundle["manifest"]["loop_state"])
        warmup_rng = np.random.default_rng()
        warmup_rng.bit_generator.state = loop.pop("warmup_rng_state")
        seed = loop.pop("seed")
        # Resuming into a fresh directory still needs the output files.
        if not (out / "metrics.csv").exists():
            (out / "run.json").write_text(json.dumps({
                "algorithm": config.algorithm, "seed": seed, "config": cfg_text,
            }, indent=2))
            _init_file(out / "metrics.csv", METRICS_SCHEMA, METRICS_COLUMNS)
            _init_file(out / "eval.csv", EVAL_SCHEMA, ["global_step", "score"])
            _init_file(out / "timings.csv", TIMINGS_SCHEMA, ["window_end_step", "seconds"])

    stats = _EpisodeStats(loop.get("stats"))
    obs = np.array(loop["obs"], dtype=float)
    t = int(loop["t"])
    episode = int(loop["episode"])
    episode_start_step = int(loop.get("episode_start_step", 0))

    window = config.wallclock_window
    window_elapsed = 0.0
    window_steps = 0

    def save_full(path):
        ckpt.save_checkpoint(
            path, config_text=cfg_text, algorithm=config.algorithm,
            global_step=t, agent=agent,
            env_snapshot=env.snapshot(),
            buffer=buffer if config.checkpoint_buffer else None,
            loop_state={
                "t": t, "episode": episode, "obs": obs.tolist(),
                "stats": stats.s, "episode_start_step": episode_start_step,
                "warmup_rng_state": warmup_rng.bit_generator.state,
                "seed": seed,
            })

    while t < config.max_timesteps:
        tic = time.perf_counter()
        if t < config.start_timesteps:
            action = warmup_rng.uniform(-1.0, 1.0, size=act_dim)
        else:
            action = agent.select_action(obs, mode="explore")
        outcome = env.step(action)
        buffer.add(obs, action, outcome.reward, outcome.observation, outcome.done)
        stats.add_step(outcome)
        if config.trajectory:
            info = outcome.info
            row = ([t] + list(obs) + list(action)
                   + [outcome.reward, info["breakdown"].total_w,
                      info["breakdown"].cpu_demand_cores,
                      info["sinr_violations"] + info["cpu_violations"]])
            _append(out / "trajectory.csv", ",".join(_fmt(v) for v in row))
        obs = outcome.observation
        if t >= config.start_timesteps:
            diag = agent.train_step(buffer, t)
            if diag is not None:
                stats.add_diag(diag)
        t += 1
        window_elapsed += time.perf_counter() - tic
        window_steps += 1
        if window_steps == window:
            _append(out / "timings.csv", f"{t},{window_elapsed:.9f}")
            window_elapsed = 0.0
            window_steps = 0

        if outcome.done:
            _append(out / "metrics.csv",
                    ",".join(_fmt(v) for v in stats.row(t, episode)))
            episode += 1
            episode_start_step = t
            stats = _EpisodeStats()
            obs = env.reset()
            agent.reset_noise()

        if t % config.eval_interval == 0:
            # Fixed per-run eval seeds: evaluation points stay paired, so
            # learning-curve changes reflect the policy, not episode luck.
            score = evaluate(agent, config, base_seed=seed * 1_000_003)
            _append(out / "eval.csv", f"{t},{_fmt(score)}")
            log.info("%s step %d eval score %.4f", config.algorithm, t, score)
            ckpt.save_checkpoint(
                out / "checkpoints" / f"ckpt_{t:08d}.zip",
                config_text=cfg_text, algorithm=config.algorithm,
                global_step=t, agent=agent)
            save_full(out / "checkpoints" / "latest.zip")

    save_full(out / "checkpoints" / "latest.zip")
    evals = read_series(out / "eval.csv")
    (out / "summary.json").write_text(json.dumps({
        "algorithm": config.algorithm,
        "seed": seed,
        "global_step": t,
        "episodes": episode,
        "final_eval_score": evals[-1][1] if evals else None,
    }, indent=2))
    return out


def read_series(path) -> list:
    """Parse one of the delimited metric files into (row as floats) tuples."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        schema = fh.readline()
        if not schema.startswith("# slicerl-"):
            raise ValueError(f"{path} has no schema header")
        header = fh.readline().strip().split(",")
        for line in fh:
            if line.strip():
                rows.append(tuple(float(x) for x in line.strip().split(",")))
    rows_header = header  # noqa: F841  (kept for symmetry; columns are fixed)
    return rows


def read_table(path) -> tuple[list[str], list[tuple]]:
    with open(path, "r", encoding="utf-8") as fh:
        fh.readline()
        header = fh.readline().strip().split(",")
    return header, read_series(path)


def evaluate_checkpoint(path, episodes: int = 5, best: int = 3,
                        base_seed: int = 0) -> float:
    """Score a saved policy under the best-k-of-n protocol."""
    bundle = ckpt.load_checkpoint(path)
    config = load_config_text(bundle["manifest"]["config_text"])
    env = SliceEnv(config.env)
    agent = ckpt.restore_agent(bundle, env.observation_dim, env.action_dim, config.agent)
    return evaluate(agent, config, episodes=episodes, best=best, base_seed=base_seed)


def report_wallclock(run_dirs, max_windows: int = 100) -> dict:
    """Mean wall-clock seconds per training window for each algorithm.

    Windows are the per-`wallclock_window`-step timings recorded during
    training (environment resets excluded from the measurement).  The last
    `max_windows` windows of each run are used: early windows fall inside
    the update-free warmup phase, where every algorithm costs the same.
    """
    per_algorithm: dict[str, list] = {}
    for run_dir in run_dirs:
        run_dir = Path(run_dir)
        meta = json.loads((run_dir / "run.json").read_text())
        rows = read_series(run_dir / "timings.csv")
        per_algorithm.setdefault(meta["algorithm"], []).extend(
            r[1] for r in rows[-max_windows:]
        )
    return {
        alg: float(np.mean(vals)) for alg, vals in per_algorithm.items() if vals
    }


def format_wallclock_table(report: dict, window: int = 50) -> str:
    lines = [f"{'algorithm':<10} {'mean s / %d steps' % window:>20}"]
    for alg, mean_s in sorted(report.items(), key=lambda kv: kv[1]):
        lines.append(f"{alg:<10} {mean_s:>20.4f}")
    return "\n".join(lines)


def sweep(config: RunConfig, seeds, out_root) -> list:
    """Enumerate seeds sequentially; one independent run directory each."""
    out_root = Path(out_root)
    dirs = []
    for s in seeds:
        run_dir = out_root / f"{config.algorithm}_seed{s}"
        dirs.append(train(config, run_dir, seed=s))
    return dirs
