"""Sliced C-RAN control environment with a reset/step/seed interface.

The agent picks one CPU vertical-scaling level and one beamforming power
level per slice each step; the environment draws traffic and channels,
prices the resulting energy, checks per-user QoS constraints and returns
the normalized, penalty-adjusted reward.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

import numpy as np

from . import cost, radio
from .cost import ComputeModel, CostBreakdown
from .radio import RadioTopology


@dataclass
class SliceSpec:
    """QoS thresholds, traffic intensity and penalty weights of one slice."""

    id: str
    sinr_threshold: float
    cpu_threshold: float
    arrival_rate: float
    penalty_sinr: float = 0.5
    penalty_cpu: float = 0.2

    def __post_init__(self):
        if self.penalty_sinr <= self.penalty_cpu:
            raise ValueError("SINR penalty must exceed CPU penalty")
        if self.sinr_threshold <= 0 or self.cpu_threshold <= 0:
            raise ValueError("thresholds must be positive")
        if self.arrival_rate < 0:
            raise ValueError("arrival rate must be non-negative")


def default_slices() -> list[SliceSpec]:
    # Slice A carries the fewest users (lowest arrival rate) but the
    # strictest QoS.
    return [
        SliceSpec("A", sinr_threshold=1.0, cpu_threshold=1.2, arrival_rate=1.0),
        SliceSpec("B", sinr_threshold=0.5, cpu_threshold=1.0, arrival_rate=2.0),
        SliceSpec("C", sinr_threshold=0.2, cpu_threshold=1.0, arrival_rate=2.0),
    ]


@dataclass
class EnvConfig:
    n_aps: int = 4
    n_users_max: int = 8
    slices: list[SliceSpec] = field(default_factory=default_slices)
    horizon: int = 200
    omega_hat: float = 10.0
    p_max_watts: float = 1.0
    noise_dbm: float = -102.0
    antenna_gain_dbi: float = 9.0
    shadowing_std_db: float = 8.0
    bandwidth_hz: float = 10e6
    path_loss_log_base: int = 2
    reg_noise: float | None = None
    compute: ComputeModel = field(default_factory=ComputeModel)
    cpu_capacity: float = 16.0  # total core pool the scaling action works against
    energy_cap_w: float = 400.0  # min-max cap for the energy observation
    energy_floor_w: float = 1e-6
    mean_lifetime_steps: float = 20.0

    def __post_init__(self):
        if self.omega_hat <= 0:
            raise ValueError("omega_hat must be positive")
        if self.cpu_capacity <= 0 or self.energy_cap_w <= 0:
            raise ValueError("cpu_capacity and energy_cap_w must be positive")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.mean_lifetime_steps < 1:
            raise ValueError("mean lifetime must be at least one step")

    @property
    def n_slices(self) -> int:
        return len(self.slices)

    @property
    def observation_dim(self) -> int:
        return 3 * self.n_slices + 1

    @property
    def action_dim(self) -> int:
        return 1 + self.n_slices

    @property
    def noise_watts(self) -> float:
        return radio.dbm_to_watts(self.noise_dbm)


@dataclass
class StepOutcome:
    observation: np.ndarray
    reward: float
    done: bool
    info: dict


def constraint_indicator(per_user_sinr, per_user_delta, slices: list[SliceSpec]):
    """Per-user violation indicators and the aggregate any-violation flag.

    A user violates when its SINR falls below the slice threshold or its CPU
    fraction exceeds the slice cap.  Returns (sinr_viol, cpu_viol, chi).
    """
    per_user_sinr = np.asarray(per_user_sinr, dtype=float)
    per_user_delta = np.asarray(per_user_delta, dtype=float)
    if not (len(per_user_sinr) == len(per_user_delta) == len(slices)):
        raise ValueError("per-user lists must align")
    sinr_viol = np.array(
        [s < sl.sinr_threshold for s, sl in zip(per_user_sinr, slices)], dtype=bool
    )
    cpu_viol = np.array(
        [d > sl.cpu_threshold for d, sl in zip(per_user_delta, slices)], dtype=bool
    )
    chi = int(bool(np.any(sinr_viol) or np.any(cpu_viol)))
    return sinr_viol, cpu_viol, chi


def penalty(sinr_viol, cpu_viol, slices: list[SliceSpec]) -> float:
    """Summed penalty; a user violating both pays only the (larger) SINR one."""
    total = 0.0
    for sv, cv, sl in zip(sinr_viol, cpu_viol, slices):
        if sv:
            total -= sl.penalty_sinr
        elif cv:
            total -= sl.penalty_cpu
    return total


def reward(
    breakdown: CostBreakdown,
    n_users: int,
    penalties: float,
    omega_hat: float,
    energy_floor_w: float = 1e-6,
) -> float:
    """Normalized return: inverse per-user cost plus penalties, over omega_hat.

    Clamped to [-1, 1]; the energy total is floored before inversion so an
    idle network cannot blow the reward up.
    """
    if omega_hat <= 0:
        raise ValueError("omega_hat must be positive")
    if n_users < 1:
        return 0.0
    per_user = max(breakdown.total_w, energy_floor_w) / n_users
    value = (1.0 / per_user + penalties) / omega_hat
    return float(np.clip(value, -1.0, 1.0))


class SliceEnv:
    """Fixed-horizon MDP over the radio and cost layers.

    Single-owner: one caller drives reset/step sequentially.  All randomness
    comes from the generator seeded in :meth:`reset`, so equal seeds and
    action sequences give identical trajectories.
    """

    def __init__(self, config: EnvConfig | None = None):
        self.config = config or EnvConfig()
        self._rng = np.random.default_rng()
        self._t = 0
        self._user_slices: list[int] = []  # slice index per active user
        self._user_distances: list[np.ndarray] = []  # AP distance column per user
        self._alloc_per_slice = np.zeros(self.config.n_slices)
        self._prev_demand_per_slice = np.zeros(self.config.n_slices)
        self._prev_energy_w = 0.0
        self._last_arrivals = np.zeros(self.config.n_slices)

    # -- interface ---------------------------------------------------------

    @property
    def observation_dim(self) -> int:
        return self.config.observation_dim

    @property
    def action_dim(self) -> int:
        return self.config.action_dim

    def random_action(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-1.0, 1.0, size=self.action_dim)

    def reset(self, seed: int | None = None) -> np.ndarray:
        cfg = self.config
        if seed is not None:
            self._rng = np.random.default_rng(seed)
        rng = self._rng
        self._t = 0
        rates = np.array([s.arrival_rate for s in cfg.slices], dtype=float)
        probs = rates / rates.sum() if rates.sum() > 0 else np.full(len(rates), 1.0 / len(rates))
        n0 = cfg.n_users_max // 2
        self._user_slices = [int(rng.choice(cfg.n_slices, p=probs)) for _ in range(n0)]
        self._user_distances = [
            radio.sample_distances(cfg.n_aps, 1, rng)[:, 0] for _ in range(n0)
        ]
        self._alloc_per_slice = np.zeros(cfg.n_slices)
        self._prev_demand_per_slice = np.zeros(cfg.n_slices)
        self._prev_energy_w = 0.0
        self._last_arrivals = np.zeros(cfg.n_slices)
        return self._observe()

    def step(self, action) -> StepOutcome:
        cfg = self.config
        rng = self._rng
        action = np.asarray(action, dtype=float)
        if action.shape != (self.action_dim,):
            raise ValueError(f"action shape {action.shape} != ({self.action_dim},)")
        if np.any(action < -1.0) or np.any(action > 1.0):
            raise ValueError("raw action components must lie in [-1, 1]")

        # 1) CPU vertical scaling: the raw level maps onto the time-varying
        # range [-C_net, C_Z - C_net], so demand + offset lands in [0, C_Z].
        c_net = float(self._prev_demand_per_slice.sum())
        offset = -c_net + (action[0] + 1.0) / 2.0 * cfg.cpu_capacity
        total_alloc = float(np.clip(c_net + offset, 0.0, cfg.cpu_capacity))
        shares = self._demand_shares()
        self._alloc_per_slice = total_alloc * shares

        # 2) Per-slice beamforming power, bounded by P_max by construction.
        slice_power = (action[1:] + 1.0) / 2.0 * cfg.p_max_watts

        # 3) Traffic churn: geometric departures, then Poisson arrivals
        # admitted against the user cap.
        keep = rng.random(len(self._user_slices)) >= 1.0 / cfg.mean_lifetime_steps
        self._user_slices = [s for s, k in zip(self._user_slices, keep) if k]
        self._user_distances = [d for d, k in zip(self._user_distances, keep) if k]
        arrivals = rng.poisson([s.arrival_rate for s in cfg.slices])
        self._last_arrivals = arrivals.astype(float)
        for l in range(cfg.n_slices):
            for _ in range(int(arrivals[l])):
                if len(self._user_slices) >= cfg.n_users_max:
                    break
                self._user_slices.append(l)
                self._user_distances.append(radio.sample_distances(cfg.n_aps, 1, rng)[:, 0])

        # 4) Radio and cost layers for the post-churn user set.
        m = len(self._user_slices)
        user_slices = list(self._user_slices)
        if m > 0:
            topo = RadioTopology(
                n_aps=cfg.n_aps,
                n_users_max=m,
                distances=np.column_stack(self._user_distances),
                antenna_gain_dbi=cfg.antenna_gain_dbi,
                shadowing_std_db=cfg.shadowing_std_db,
                noise_dbm=cfg.noise_dbm,
                bandwidth_hz=cfg.bandwidth_hz,
                p_max_watts=cfg.p_max_watts,
                reg_noise=cfg.reg_noise,
                path_loss_log_base=cfg.path_loss_log_base,
            )
            H = radio.draw_channel(topo, rng)
            powers = np.array([slice_power[l] for l in user_slices])
            V = radio.beamform(H, powers, topo.beamformer_reg)
            sinrs = radio.sinr_all(H, V, topo.noise_watts)
            rates = radio.rate(sinrs)
            deltas = np.array(
                [cost.cpu_fraction(rates[i], V.vectors[:, i], cfg.compute) for i in range(m)]
            )
        else:
            V = None
            sinrs = np.zeros(0)
            rates = np.zeros(0)
            deltas = np.zeros(0)
        breakdown = cost.network_energy(V, deltas, cfg.compute)

        # 5) Constraints, penalties, reward.  An allocation shortfall
        # (demand above the granted or physical core pool) counts as a CPU
        # violation for every served user.
        specs = [cfg.slices[l] for l in user_slices]
        sinr_viol, cpu_viol, chi = constraint_indicator(sinrs, deltas, specs)
        effective_capacity = min(total_alloc, float(cfg.compute.max_cpus))
        shortfall = breakdown.cpu_demand_cores > effective_capacity
        if shortfall and m > 0:
            cpu_viol = np.ones(m, dtype=bool)
            chi = 1
        pen = penalty(sinr_viol, cpu_viol, specs) / m if m > 0 else 0.0
        r = reward(breakdown, m, pen, cfg.omega_hat, cfg.energy_floor_w)

        # 6) Bookkeeping for the next state.
        self._prev_demand_per_slice = np.zeros(cfg.n_slices)
        for i, l in enumerate(user_slices):
            self._prev_demand_per_slice[l] += deltas[i] if m else 0.0
        self._prev_energy_w = breakdown.total_w
        self._t += 1
        done = self._t >= cfg.horizon

        per_slice_energy = self._per_slice_energy(breakdown, user_slices, V)
        utilization = (
            min(breakdown.cpu_demand_cores, total_alloc) / total_alloc if total_alloc > 0 else 0.0
        )
        info = {
            "breakdown": breakdown,
            "sinr": sinrs,
            "rates": rates,
            "deltas": deltas,
            "sinr_violations": int(sinr_viol.sum()),
            "cpu_violations": int(cpu_viol.sum()),
            "chi": chi,
            "penalty": pen,
            "n_users": m,
            "users_per_slice": self._users_per_slice(),
            "arrivals": arrivals.copy(),
            "alloc_total": total_alloc,
            "alloc_per_slice": self._alloc_per_slice.copy(),
            "slice_power": slice_power,
            "per_slice_energy_w": per_slice_energy,
            "cpu_utilization": utilization,
            "allocation_shortfall": bool(shortfall),
        }
        return StepOutcome(observation=self._observe(), reward=r, done=done, info=info)

    # -- snapshot / restore -------------------------------------------------

    def snapshot(self) -> dict:
        """Full mutable state incl. the RNG, for replay and exact resume."""
        return {
            "t": self._t,
            "user_slices": list(self._user_slices),
            "user_distances": [d.copy() for d in self._user_distances],
            "alloc_per_slice": self._alloc_per_slice.copy(),
            "prev_demand_per_slice": self._prev_demand_per_slice.copy(),
            "prev_energy_w": self._prev_energy_w,
            "last_arrivals": self._last_arrivals.copy(),
            "rng_state": copy.deepcopy(self._rng.bit_generator.state),
        }

    def restore(self, state: dict) -> None:
        self._t = state["t"]
        self._user_slices = list(state["user_slices"])
        self._user_distances = [np.array(d, dtype=float) for d in state["user_distances"]]
        self._alloc_per_slice = np.array(state["alloc_per_slice"], dtype=float)
        self._prev_demand_per_slice = np.array(state["prev_demand_per_slice"], dtype=float)
        self._prev_energy_w = float(state["prev_energy_w"])
        self._last_arrivals = np.array(state["last_arrivals"], dtype=float)
        self._rng = np.random.default_rng()
        self._rng.bit_generator.state = copy.deepcopy(state["rng_state"])

    # -- internals ----------------------------------------------------------

    def _users_per_slice(self) -> np.ndarray:
        counts = np.zeros(self.config.n_slices)
        for l in self._user_slices:
            counts[l] += 1
        return counts

    def _demand_shares(self) -> np.ndarray:
        total = self._prev_demand_per_slice.sum()
        if total > 0:
            return self._prev_demand_per_slice / total
        return np.full(self.config.n_slices, 1.0 / self.config.n_slices)

    def _per_slice_energy(self, breakdown: CostBreakdown, user_slices, V) -> np.ndarray:
        """Attribute baseband energy by demand share, transmission by power."""
        cfg = self.config
        out = np.zeros(cfg.n_slices)
        demand = self._prev_demand_per_slice  # already this step's demand
        total_demand = demand.sum()
        if total_demand > 0:
            out += breakdown.baseband_w * demand / total_demand
        if V is not None:
            for i, l in enumerate(user_slices):
                out[l] += float(np.sum(np.abs(V.vectors[:, i]) ** 2))
        return out

    def _observe(self) -> np.ndarray:
        cfg = self.config
        arrivals_scale = np.array([1.0 + 2.0 * s.arrival_rate for s in cfg.slices])
        obs = np.concatenate(
            [
                self._last_arrivals / arrivals_scale,
                self._alloc_per_slice / cfg.cpu_capacity,
                [min(self._prev_energy_w / cfg.energy_cap_w, 1.0)],
                self._users_per_slice() / cfg.n_users_max,
            ]
        )
        return obs.astype(float)
