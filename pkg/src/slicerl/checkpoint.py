"""Checkpoint bundles: one zip holding networks, optimizer state, RNG
states, the environment snapshot and (optionally) the replay buffer —
enough for bit-exact training resume.

Network parameters use the versioned binary MLP container from :mod:`nn`;
numeric arrays ride in an embedded .npz; everything else is JSON.
"""

from __future__ import annotations

import io
import json
import zipfile

import numpy as np

from .agents import ReplayBuffer, make_agent
from .nn import AdamState, load_mlp, save_mlp

FORMAT_VERSION = 1


def _opt_meta(opt: AdamState) -> dict:
    return {
        "learning_rate": opt.learning_rate,
        "beta1": opt.beta1,
        "beta2": opt.beta2,
        "epsilon": opt.epsilon,
        "step_count": opt.step_count,
    }


def save_checkpoint(path, *, config_text: str, algorithm: str, global_step: int,
                    agent, env_snapshot: dict | None = None,
                    buffer: ReplayBuffer | None = None,
                    loop_state: dict | None = None) -> None:
    arrays = {}
    manifest = {
        "version": FORMAT_VERSION,
        "algorithm": algorithm,
        "global_step": global_step,
        "config_text": config_text,
        "agent_extra": agent.extra_state(),
        "opt_meta": {name: _opt_meta(opt) for name, opt in agent.opt_states.items()},
        "loop_state": loop_state or {},
        "has_buffer": buffer is not None,
        "env_snapshot": None,
    }
    for name, opt in agent.opt_states.items():
        for i, (m, v) in enumerate(zip(opt.first_moment, opt.second_moment)):
            arrays[f"opt.{name}.m{i}"] = m
            arrays[f"opt.{name}.v{i}"] = v
    if buffer is not None:
        n = buffer.size
        manifest["buffer"] = {
            "capacity": buffer.capacity,
            "size": n,
            "position": buffer.position,
            "rng_state": buffer.rng.bit_generator.state,
        }
        arrays["buffer.states"] = buffer.states[:n]
        arrays["buffer.actions"] = buffer.actions[:n]
        arrays["buffer.rewards"] = buffer.rewards[:n]
        arrays["buffer.next_states"] = buffer.next_states[:n]
        arrays["buffer.dones"] = buffer.dones[:n]
    if env_snapshot is not None:
        snap = dict(env_snapshot)
        dists = snap.pop("user_distances")
        arrays["env.user_distances"] = (
            np.stack(dists) if len(dists) else np.zeros((0, 0))
        )
        for key in ("alloc_per_slice", "prev_demand_per_slice", "last_arrivals"):
            arrays[f"env.{key}"] = np.asarray(snap.pop(key))
        manifest["env_snapshot"] = snap

    with zipfile.ZipFile(path, "w", zipfile.ZIP_STORED) as zf:
        zf.writestr("manifest.json", json.dumps(manifest))
        for name, net in agent.networks.items():
            buf = io.BytesIO()
            save_mlp(net, buf)
            zf.writestr(f"networks/{name}.mlp", buf.getvalue())
        npz = io.BytesIO()
        np.savez(npz, **arrays)
        zf.writestr("arrays.npz", npz.getvalue())


def load_checkpoint(path) -> dict:
    """Read a bundle back into a dict of manifest, networks and arrays."""
    with zipfile.ZipFile(path, "r") as zf:
        manifest = json.loads(zf.read("manifest.json"))
        if manifest["version"] != FORMAT_VERSION:
            raise ValueError(f"unsupported checkpoint version {manifest['version']}")
        networks = {}
        for info in zf.namelist():
            if info.startswith("networks/") and info.endswith(".mlp"):
                name = info[len("networks/") : -len(".mlp")]
                networks[name] = load_mlp(io.BytesIO(zf.read(info)))
        arrays = dict(np.load(io.BytesIO(zf.read("arrays.npz"))))
    return {"manifest": manifest, "networks": networks, "arrays": arrays}


def restore_agent(bundle: dict, obs_dim: int, act_dim: int, agent_config):
    """Rebuild an agent object from a loaded bundle."""
    manifest = bundle["manifest"]
    agent = make_agent(manifest["algorithm"], obs_dim, act_dim, agent_config, seed=0)
    for name, net in agent.networks.items():
        net.copy_from(bundle["networks"][name])
    for name, opt in agent.opt_states.items():
        meta = manifest["opt_meta"][name]
        opt.learning_rate = meta["learning_rate"]
        opt.beta1 = meta["beta1"]
        opt.beta2 = meta["beta2"]
        opt.epsilon = meta["epsilon"]
        opt.step_count = meta["step_count"]
        for i in range(len(opt.first_moment)):
            opt.first_moment[i][...] = bundle["arrays"][f"opt.{name}.m{i}"]
            opt.second_moment[i][...] = bundle["arrays"][f"opt.{name}.v{i}"]
    agent.load_extra_state(manifest["agent_extra"])
    return agent


def restore_buffer(bundle: dict, obs_dim: int, act_dim: int) -> ReplayBuffer | None:
    manifest = bundle["manifest"]
    if not manifest.get("has_buffer"):
        return None
    meta = manifest["buffer"]
    buf = ReplayBuffer(meta["capacity"], obs_dim, act_dim)
    n = meta["size"]
    buf.states[:n] = bundle["arrays"]["buffer.states"]
    buf.actions[:n] = bundle["arrays"]["buffer.actions"]
    buf.rewards[:n] = bundle["arrays"]["buffer.rewards"]
    buf.next_states[:n] = bundle["arrays"]["buffer.next_states"]
    buf.dones[:n] = bundle["arrays"]["buffer.dones"]
    buf.size = n
    buf.position = meta["position"]
    buf.rng.bit_generator.state = meta["rng_state"]
    return buf


def restore_env_snapshot(bundle: dict) -> dict | None:
    manifest = bundle["manifest"]
    if manifest.get("env_snapshot") is None:
        return None
    snap = dict(manifest["env_snapshot"])
    dists = bundle["arrays"]["env.user_distances"]
    snap["user_distances"] = [dists[i] for i in range(dists.shape[0])]
    for key in ("alloc_per_slice", "prev_demand_per_slice", "last_arrivals"):
        snap[key] = bundle["arrays"][f"env.{key}"]
    return snap
