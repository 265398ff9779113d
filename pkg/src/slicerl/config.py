"""Declarative run configuration: flat INI files with sections.

Every hyperparameter and every network/cost coefficient has a named key.
Two bundled profiles ship with the package: ``desk`` (laptop-scale) and
``paper`` (full-scale).
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, fields, replace
from importlib import resources

from .agents import ALGORITHMS, DESK_CONFIGS, PAPER_CONFIGS, AgentConfig
from .cost import ComputeModel
from .env import EnvConfig, SliceSpec


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    algorithm: str = "tdsac"
    max_timesteps: int = 50_000
    start_timesteps: int = 5_000
    eval_interval: int = 2_500
    eval_episodes: int = 5
    eval_best: int = 3
    seed: int = 1
    buffer_size: int = 100_000
    checkpoint_buffer: bool = True
    trajectory: bool = False
    wallclock_window: int = 50
    agent_defaults: str = "desk"
    agent: AgentConfig = None
    env: EnvConfig = field(default_factory=EnvConfig)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.eval_best > self.eval_episodes:
            raise ConfigError("eval_best must not exceed eval_episodes")
        if self.max_timesteps <= self.start_timesteps:
            raise ConfigError("max_timesteps must exceed start_timesteps")
        if self.agent is None:
            base = DESK_CONFIGS if self.agent_defaults == "desk" else PAPER_CONFIGS
            self.agent = replace(base[self.algorithm])


_RUN_KEYS = {
    "algorithm": str,
    "max_timesteps": int,
    "start_timesteps": int,
    "eval_interval": int,
    "eval_episodes": int,
    "eval_best": int,
    "seed": int,
    "buffer_size": int,
    "checkpoint_buffer": bool,
    "trajectory": bool,
    "wallclock_window": int,
    "agent_defaults": str,
}

_AGENT_KEYS = {
    "hidden": "int_tuple",
    "activation": str,
    "lr_actor": float,
    "lr_critic": float,
    "lr_alpha": float,
    "gamma": float,
    "tau": float,
    "freq": int,
    "batch_size": int,
    "grad_clip": float,
    "entropy_in_discount": bool,
    "actor_uses_min_q": bool,
    "target_entropy": float,
    "exploration_noise": float,
    "smoothing_noise": float,
    "smoothing_clip": float,
    "ou_theta": float,
    "ou_sigma": float,
}

_ENV_KEYS = {
    "n_aps": int,
    "n_users_max": int,
    "horizon": int,
    "omega_hat": float,
    "p_max_watts": float,
    "noise_dbm": float,
    "antenna_gain_dbi": float,
    "shadowing_std_db": float,
    "bandwidth_hz": float,
    "path_loss_log_base": int,
    "reg_noise": float,
    "cpu_capacity": float,
    "energy_cap_w": float,
    "energy_floor_w": float,
    "mean_lifetime_steps": float,
}

_COMPUTE_KEYS = {
    "theta_hat": float,
    "c0": float,
    "delta": float,
    "active_link_epsilon": float,
    "iota": float,
    "p_z": float,
    "psi_vnf": float,
    "max_vnfs": int,
    "max_cpus": int,
    "vnf_capacity_cores": float,
}

_SLICE_KEYS = {
    "sinr_threshold": float,
    "cpu_threshold": float,
    "arrival_rate": float,
    "penalty_sinr": float,
    "penalty_cpu": float,
}


def _convert(raw: str, kind):
    if kind is bool:
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"not a boolean: {raw!r}")
    if kind == "int_tuple":
        return tuple(int(x) for x in raw.split(",") if x.strip())
    return kind(raw)


def _read_section(parser, name, keys) -> dict:
    out = {}
    if not parser.has_section(name):
        return out
    for key, raw in parser.items(name):
        if key not in keys:
            raise ConfigError(f"unknown key {key!r} in [{name}]")
        try:
            out[key] = _convert(raw, keys[key])
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r} in [{name}]: {raw!r}") from exc
    return out


def load_config_text(text: str) -> RunConfig:
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    run_kv = _read_section(parser, "run", _RUN_KEYS)
    agent_kv = _read_section(parser, "agent", _AGENT_KEYS)
    env_kv = _read_section(parser, "env", _ENV_KEYS)
    compute_kv = _read_section(parser, "compute", _COMPUTE_KEYS)

    slices = []
    for section in parser.sections():
        if section.startswith("slice."):
            kv = _read_section(parser, section, _SLICE_KEYS)
            try:
                slices.append(SliceSpec(id=section.split(".", 1)[1], **kv))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad slice section [{section}]: {exc}") from exc

    try:
        compute = ComputeModel(**compute_kv)
        env_cfg = EnvConfig(compute=compute, **env_kv)
        if slices:
            env_cfg.slices = slices
        cfg = RunConfig(env=env_cfg, **run_kv)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if agent_kv:
        cfg.agent = replace(cfg.agent, **agent_kv)
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return load_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def config_to_text(cfg: RunConfig) -> str:
    """Serialize a RunConfig back to INI (used to embed it in checkpoints)."""
    parser = configparser.ConfigParser()
    parser["run"] = {k: _fmt(getattr(cfg, k)) for k in _RUN_KEYS}
    parser["agent"] = {
        k: _fmt(getattr(cfg.agent, k))
        for k in _AGENT_KEYS
        if getattr(cfg.agent, k) is not None
    }
    parser["env"] = {
        k: _fmt(getattr(cfg.env, k)) for k in _ENV_KEYS if getattr(cfg.env, k) is not None
    }
    parser["compute"] = {k: _fmt(getattr(cfg.env.compute, k)) for k in _COMPUTE_KEYS}
    for sl in cfg.env.slices:
        parser[f"slice.{sl.id}"] = {k: _fmt(getattr(sl, k)) for k in _SLICE_KEYS}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    return repr(value) if isinstance(value, float) else str(value)


def profile_text(name: str) -> str:
    """Text of a bundled profile ('desk' or 'paper')."""
    ref = resources.files("slicerl.profiles") / f"{name}.ini"
    try:
        return ref.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise ConfigError(f"no bundled profile named {name!r}") from exc


def load_profile(name: str, algorithm: str | None = None, **overrides) -> RunConfig:
    cfg = load_config_text(profile_text(name))
    if algorithm is not None and algorithm != cfg.algorithm:
        # Rebuild so the agent picks up the right per-algorithm defaults.
        cfg = replace(cfg, algorithm=algorithm, agent=None)
    for key, value in overrides.items():
        if not any(f.name == key for f in fields(RunConfig)):
            raise ConfigError(f"unknown override {key!r}")
        setattr(cfg, key, value)
    return cfg
