"""Off-policy continuous-control agents and their replay buffer.

The flagship agent is the twin-delayed double-Q soft actor-critic: two
critics with clipped-double-Q targets computed from fresh current-policy
actions, a tanh-Gaussian actor, a learned entropy temperature, and delayed
actor/temperature/target updates.  DDPG, TD3 and a conventional SAC are
provided as baselines behind the same train_step interface.
"""

from __future__ import annotations

import copy
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from . import nn
from .nn import AdamState, Mlp, adam_step, clip_gradients, polyak_blend

log = logging.getLogger(__name__)

LOG_ALPHA_BOUNDS = (np.log(1e-4), np.log(10.0))
LOG_STD_BOUNDS = (-20.0, 2.0)


@dataclass
class Batch:
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    dones: np.ndarray

    def __len__(self):
        return self.states.shape[0]


class ReplayBuffer:
    """Fixed-capacity FIFO transition store with uniform sampling."""

    def __init__(self, capacity: int, obs_dim: int, act_dim: int, seed: int | None = None):
        self.capacity = int(capacity)
        self.states = np.zeros((self.capacity, obs_dim))
        self.actions = np.zeros((self.capacity, act_dim))
        self.rewards = np.zeros(self.capacity)
        self.next_states = np.zeros((self.capacity, obs_dim))
        self.dones = np.zeros(self.capacity)
        self.size = 0
        self.position = 0
        self.rng = np.random.default_rng(seed)

    def __len__(self) -> int:
        return self.size

    def add(self, state, action, reward, next_state, done) -> None:
        i = self.position
        self.states[i] = state
        self.actions[i] = action
        self.rewards[i] = reward
        self.next_states[i] = next_state
        self.dones[i] = float(done)
        self.position = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, batch_size: int) -> Batch:
        if self.size == 0:
            raise ValueError("cannot sample from an empty buffer")
        idx = self.rng.integers(0, self.size, size=batch_size)
        return Batch(
            states=self.states[idx],
            actions=self.actions[idx],
            rewards=self.rewards[idx],
            next_states=self.next_states[idx],
            dones=self.dones[idx],
        )


@dataclass
class AgentConfig:
    """Hyperparameters shared across the agent family.

    Fields irrelevant to a variant (e.g. temperature settings for DDPG) are
    simply unused by it.
    """

    hidden: tuple = (128, 128, 128, 128, 128)
    activation: str = "gelu"
    lr_actor: float = 1e-3
    lr_critic: float = 1e-3
    lr_alpha: float = 1e-3
    gamma: float = 0.99
    tau: float = 0.001
    freq: int = 2
    batch_size: int = 128
    grad_clip: float = 10.0
    entropy_in_discount: bool = False
    actor_uses_min_q: bool = False
    target_entropy: float | None = None  # None -> -dim(action)
    exploration_noise: float = 0.1  # TD3 Gaussian exploration sigma
    smoothing_noise: float = 0.2  # TD3 target-policy smoothing sigma
    smoothing_clip: float = 0.5
    ou_theta: float = 0.15
    ou_sigma: float = 0.2


PAPER_CONFIGS = {
    "tdsac": AgentConfig(),
    "sac": AgentConfig(
        hidden=(256, 256),
        activation="relu",
        lr_actor=1e-4,
        lr_critic=1e-4,
        lr_alpha=1e-4,
        tau=0.005,
        freq=1,
        batch_size=256,
        entropy_in_discount=True,
    ),
    "td3": AgentConfig(
        hidden=(400, 300),
        activation="relu",
        lr_actor=1e-3,
        lr_critic=1e-3,
        tau=0.005,
        freq=2,
        batch_size=100,
    ),
    "ddpg": AgentConfig(
        hidden=(200, 200),
        activation="relu",
        lr_actor=1e-4,
        lr_critic=1e-3,
        tau=0.001,
        freq=1,
        batch_size=64,
    ),
}

# Laptop-scale variants of the same family, smaller nets and batches.  The
# twin-delayed agent keeps one extra hidden layer, mirroring its deeper
# full-scale architecture.
DESK_CONFIGS = {
    "tdsac": replace(PAPER_CONFIGS["tdsac"], hidden=(64, 64, 64), batch_size=64),
    "sac": replace(PAPER_CONFIGS["sac"], hidden=(64, 64), batch_size=64),
    "td3": replace(PAPER_CONFIGS["td3"], hidden=(64, 64), batch_size=64),
    "ddpg": replace(PAPER_CONFIGS["ddpg"], hidden=(64, 64), batch_size=64),
}


def _critic_value_and_grad(critic: Mlp, states, actions):
    """Q(s, a) and dQ/da for each sample of a batch."""
    x = np.concatenate([states, actions], axis=1)
    q, cache = critic.forward_cached(x)
    grads = critic.backward(cache, np.ones_like(q))
    return q[:, 0], grads.d_input[:, states.shape[1] :]


class SoftActorCriticAgent:
    """Maximum-entropy double-Q agent (TDSAC by default, SAC by config).

    With freq=2 and the entropy term outside the discount this is the
    twin-delayed variant; freq=1, entropy inside the discount and its own
    Table-style hyperparameters give the conventional SAC baseline.
    """

    def __init__(self, obs_dim: int, act_dim: int, config: AgentConfig, seed: int | None = None,
                 name: str = "tdsac"):
        self.name = name
        self.obs_dim = obs_dim
        self.act_dim = act_dim
        self.config = config
        rng = np.random.default_rng(seed)
        h = list(config.hidden)
        self.actor = Mlp([obs_dim] + h + [2 * act_dim], config.activation, rng, final_scale=1e-2)
        self.critic1 = Mlp([obs_dim + act_dim] + h + [1], config.activation, rng)
        self.critic2 = Mlp([obs_dim + act_dim] + h + [1], config.activation, rng)
        self.target1 = self.critic1.clone()
        self.target2 = self.critic2.clone()
        self.log_alpha = 0.0
        self.target_entropy = (
            config.target_entropy if config.target_entropy is not None else -float(act_dim)
        )
        self.opt_actor = AdamState.for_params(self.actor.parameters(), config.lr_actor)
        self.opt_critic1 = AdamState.for_params(self.critic1.parameters(), config.lr_critic)
        self.opt_critic2 = AdamState.for_params(self.critic2.parameters(), config.lr_critic)
        self.opt_alpha = AdamState.for_params([np.zeros(1)], config.lr_alpha)
        self.rng = rng
        self.actor_update_count = 0

    # -- bookkeeping ---------------------------------------------------------

    @property
    def alpha(self) -> float:
        # exp(clip(log_alpha)) can overshoot the bound by a few ulp; clip in
        # the linear domain too so the stated range holds exactly.
        return float(np.clip(np.exp(self.log_alpha), 1e-4, 10.0))

    @property
    def network_count(self) -> int:
        return 5

    @property
    def networks(self) -> dict:
        return {
            "actor": self.actor,
            "critic1": self.critic1,
            "critic2": self.critic2,
            "target1": self.target1,
            "target2": self.target2,
        }

    @property
    def opt_states(self) -> dict:
        return {
            "actor": self.opt_actor,
            "critic1": self.opt_critic1,
            "critic2": self.opt_critic2,
            "alpha": self.opt_alpha,
        }

    def extra_state(self) -> dict:
        return {
            "log_alpha": self.log_alpha,
            "actor_update_count": self.actor_update_count,
            "rng_state": copy.deepcopy(self.rng.bit_generator.state),
        }

    def load_extra_state(self, state: dict) -> None:
        self.log_alpha = float(state["log_alpha"])
        self.actor_update_count = int(state["actor_update_count"])
        self.rng.bit_generator.state = copy.deepcopy(state["rng_state"])

    def reset_noise(self) -> None:  # stochastic policy needs no noise process
        pass

    # -- policy --------------------------------------------------------------

    def _policy_heads(self, states):
        out, cache = self.actor.forward_cached(states)
        mean = out[:, : self.act_dim]
        log_std_raw = out[:, self.act_dim :]
        log_std = np.clip(log_std_raw, *LOG_STD_BOUNDS)
        return mean, log_std, log_std_raw, cache

    def sample_action_logp(self, states, rng=None):
        """Fresh reparameterized actions and their log-probs (no gradients)."""
        rng = rng or self.rng
        mean, log_std, _, _ = self._policy_heads(states)
        noise = rng.standard_normal(mean.shape)
        return nn.sample_squashed_gaussian(mean, log_std, noise)

    def select_action(self, state, mode: str = "explore") -> np.ndarray:
        states = np.atleast_2d(np.asarray(state, dtype=float))
        if mode == "eval":
            mean, _, _, _ = self._policy_heads(states)
            return np.tanh(mean)[0]
        action, _ = self.sample_action_logp(states)
        return action[0]

    # -- updates -------------------------------------------------------------

    def compute_target(self, rewards, next_states, dones) -> np.ndarray:
        """Clipped double-Q soft target from fresh current-policy actions."""
        a2, logp2 = self.sample_action_logp(next_states)
        x2 = np.concatenate([next_states, a2], axis=1)
        q1 = self.target1.forward(x2)[:, 0]
        q2 = self.target2.forward(x2)[:, 0]
        min_q = np.minimum(q1, q2)
        g = self.config.gamma
        mask = 1.0 - np.asarray(dones, dtype=float)
        if self.config.entropy_in_discount:
            boot = g * (min_q - self.alpha * logp2)
        else:
            boot = g * min_q - self.alpha * logp2
        return np.asarray(rewards, dtype=float) + mask * boot

    def _critic_step(self, critic, opt, states, actions, y):
        x = np.concatenate([states, actions], axis=1)
        q, cache = critic.forward_cached(x)
        err = q[:, 0] - y
        loss = float(np.mean(err**2))
        upstream = (2.0 * err / len(err))[:, None]
        grads = critic.gradients_flat(critic.backward(cache, upstream))
        grads = clip_gradients(grads, self.config.grad_clip)
        adam_step(critic.parameters(), grads, opt)
        return loss, float(np.mean(q))

    def critic_update(self, batch: Batch):
        y = self.compute_target(batch.rewards, batch.next_states, batch.dones)
        l1, q1 = self._critic_step(self.critic1, self.opt_critic1, batch.states, batch.actions, y)
        l2, q2 = self._critic_step(self.critic2, self.opt_critic2, batch.states, batch.actions, y)
        return l1, l2, 0.5 * (q1 + q2)

    def _actor_q_and_grad(self, states, actions):
        if not self.config.actor_uses_min_q:
            return _critic_value_and_grad(self.critic1, states, actions)
        q1, g1 = _critic_value_and_grad(self.critic1, states, actions)
        q2, g2 = _critic_value_and_grad(self.critic2, states, actions)
        pick = (q1 <= q2)[:, None]
        return np.minimum(q1, q2), np.where(pick, g1, g2)

    def actor_update(self, batch: Batch) -> float:
        """Minimize E[alpha*log pi - Q] through the reparameterized action."""
        cfg = self.config
        s = batch.states
        n = len(batch)
        mean, log_std, log_std_raw, cache = self._policy_heads(s)
        noise = self.rng.standard_normal(mean.shape)
        std = np.exp(log_std)
        u = mean + std * noise
        a = np.tanh(u)
        squash = 1.0 - a**2
        logp = (
            nn.gaussian_log_prob(u, mean, log_std) - np.log(squash + nn.SQUASH_EPS)
        ).sum(axis=1)
        q, dq_da = self._actor_q_and_grad(s, a)
        alpha = self.alpha
        loss = float(np.mean(alpha * logp - q))

        # Gradients w.r.t. the policy heads.  d(logp)/du comes only from the
        # squashing correction (the Gaussian term is constant in u at fixed
        # noise); the -log_std density term hits the log_std head directly.
        dlogp_du = 2.0 * a * squash / (squash + nn.SQUASH_EPS)
        g_u = (alpha / n) * dlogp_du - (dq_da / n) * squash
        g_mean = g_u
        g_log_std = g_u * std * noise - (alpha / n)
        g_log_std = g_log_std * ((log_std_raw > LOG_STD_BOUNDS[0]) & (log_std_raw < LOG_STD_BOUNDS[1]))
        upstream = np.concatenate([g_mean, g_log_std], axis=1)
        grads = self.actor.gradients_flat(self.actor.backward(cache, upstream))
        grads = clip_gradients(grads, cfg.grad_clip)
        adam_step(self.actor.parameters(), grads, self.opt_actor)
        self._last_logp = logp  # reused by the temperature update
        return loss

    def temperature_update(self, batch: Batch, logp=None) -> float:
        """Adapt alpha toward the entropy target; stored in the log domain."""
        if logp is None:
            _, logp = self.sample_action_logp(batch.states)
        err = float(np.mean(-logp - self.target_entropy))
        loss = self.alpha * err
        # dJ/d(log_alpha) = alpha * E[-logp - target]; minimized, so the
        # gradient sign follows err.
        grad = np.array([self.alpha * err])
        holder = [np.array([self.log_alpha])]
        adam_step(holder, [grad], self.opt_alpha)
        self.log_alpha = float(np.clip(holder[0][0], *LOG_ALPHA_BOUNDS))
        return loss

    def polyak_update(self) -> None:
        polyak_blend(self.target1, self.critic1, self.config.tau)
        polyak_blend(self.target2, self.critic2, self.config.tau)

    def train_step(self, buffer: ReplayBuffer, t: int):
        cfg = self.config
        if len(buffer) < cfg.batch_size:
            log.info("skipping update at t=%d: buffer %d < batch %d", t, len(buffer), cfg.batch_size)
            return None
        batch = buffer.sample(cfg.batch_size)
        j_q1, j_q2, mean_q = self.critic_update(batch)
        diag = {
            "j_q1": j_q1,
            "j_q2": j_q2,
            "j_pi": float("nan"),
            "j_alpha": float("nan"),
            "alpha": self.alpha,
            "mean_q": mean_q,
        }
        if t % cfg.freq == 0:
            diag["j_pi"] = self.actor_update(batch)
            diag["j_alpha"] = self.temperature_update(batch, logp=self._last_logp)
            diag["alpha"] = self.alpha
            self.polyak_update()
            self.actor_update_count += 1
        return diag


class Td3Agent:
    """Twin critics, deterministic tanh actor, smoothed delayed targets."""

    def __init__(self, obs_dim: int, act_dim: int, config: AgentConfig, seed: int | None = None):
        self.name = "td3"
        self.obs_dim = obs_dim
        self.act_dim = act_dim
        self.config = config
        rng = np.random.default_rng(seed)
        h = list(config.hidden)
        self.actor = Mlp([obs_dim] + h + [act_dim], config.activation, rng, final_scale=1e-2)
        self.critic1 = Mlp([obs_dim + act_dim] + h + [1], config.activation, rng)
        self.critic2 = Mlp([obs_dim + act_dim] + h + [1], config.activation, rng)
        self.target_actor = self.actor.clone()
        self.target1 = self.critic1.clone()
        self.target2 = self.critic2.clone()
        self.opt_actor = AdamState.for_params(self.actor.parameters(), config.lr_actor)
        self.opt_critic1 = AdamState.for_params(self.critic1.parameters(), config.lr_critic)
        self.opt_critic2 = AdamState.for_params(self.critic2.parameters(), config.lr_critic)
        self.rng = rng
        self.actor_update_count = 0

    @property
    def network_count(self) -> int:
        return 6

    @property
    def networks(self) -> dict:
        return {
            "actor": self.actor,
            "critic1": self.critic1,
            "critic2": self.critic2,
            "target_actor": self.target_actor,
            "target1": self.target1,
            "target2": self.target2,
        }

    @property
    def opt_states(self) -> dict:
        return {
            "actor": self.opt_actor,
            "critic1": self.opt_critic1,
            "critic2": self.opt_critic2,
        }

    def extra_state(self) -> dict:
        return {
            "actor_update_count": self.actor_update_count,
            "rng_state": copy.deepcopy(self.rng.bit_generator.state),
        }

    def load_extra_state(self, state: dict) -> None:
        self.actor_update_count = int(state["actor_update_count"])
        self.rng.bit_generator.state = copy.deepcopy(state["rng_state"])

    def reset_noise(self) -> None:
        pass

    def _deterministic_action(self, actor: Mlp, states):
        return np.tanh(actor.forward(states))

    def select_action(self, state, mode: str = "explore") -> np.ndarray:
        states = np.atleast_2d(np.asarray(state, dtype=float))
        a = self._deterministic_action(self.actor, states)[0]
        if mode == "eval":
            return a
        noise = self.rng.normal(0.0, self.config.exploration_noise, size=self.act_dim)
        return np.clip(a + noise, -1.0, 1.0)

    def smoothing_noise(self, shape) -> np.ndarray:
        cfg = self.config
        eps = self.rng.normal(0.0, cfg.smoothing_noise, size=shape)
        return np.clip(eps, -cfg.smoothing_clip, cfg.smoothing_clip)

    def compute_target(self, rewards, next_states, dones) -> np.ndarray:
        a2 = self._deterministic_action(self.target_actor, next_states)
        a2 = np.clip(a2 + self.smoothing_noise(a2.shape), -1.0, 1.0)
        x2 = np.concatenate([next_states, a2], axis=1)
        min_q = np.minimum(self.target1.forward(x2)[:, 0], self.target2.forward(x2)[:, 0])
        mask = 1.0 - np.asarray(dones, dtype=float)
        return np.asarray(rewards, dtype=float) + mask * self.config.gamma * min_q

    def _critic_step(self, critic, opt, states, actions, y):
        x = np.concatenate([states, actions], axis=1)
        q, cache = critic.forward_cached(x)
        err = q[:, 0] - y
        loss = float(np.mean(err**2))
        grads = critic.gradients_flat(critic.backward(cache, (2.0 * err / len(err))[:, None]))
        grads = clip_gradients(grads, self.config.grad_clip)
        adam_step(critic.parameters(), grads, opt)
        return loss, float(np.mean(q))

    def actor_update(self, batch: Batch) -> float:
        s = batch.states
        n = len(batch)
        pre, cache = self.actor.forward_cached(s)
        a = np.tanh(pre)
        q, dq_da = _critic_value_and_grad(self.critic1, s, a)
        loss = float(-np.mean(q))
        upstream = -(dq_da / n) * (1.0 - a**2)
        grads = self.actor.gradients_flat(self.actor.backward(cache, upstream))
        grads = clip_gradients(grads, self.config.grad_clip)
        adam_step(self.actor.parameters(), grads, self.opt_actor)
        return loss

    def polyak_update(self) -> None:
        tau = self.config.tau
        polyak_blend(self.target_actor, self.actor, tau)
        polyak_blend(self.target1, self.critic1, tau)
        polyak_blend(self.target2, self.critic2, tau)

    def train_step(self, buffer: ReplayBuffer, t: int):
        cfg = self.config
        if len(buffer) < cfg.batch_size:
            log.info("skipping update at t=%d: buffer %d < batch %d", t, len(buffer), cfg.batch_size)
            return None
        batch = buffer.sample(cfg.batch_size)
        y = self.compute_target(batch.rewards, batch.next_states, batch.dones)
        j_q1, q1 = self._critic_step(self.critic1, self.opt_critic1, batch.states, batch.actions, y)
        j_q2, q2 = self._critic_step(self.critic2, self.opt_critic2, batch.states, batch.actions, y)
        diag = {
            "j_q1": j_q1,
            "j_q2": j_q2,
            "j_pi": float("nan"),
            "j_alpha": float("nan"),
            "alpha": float("nan"),
            "mean_q": 0.5 * (q1 + q2),
        }
        if t % cfg.freq == 0:
            diag["j_pi"] = self.actor_update(batch)
            self.polyak_update()
            self.actor_update_count += 1
        return diag


class DdpgAgent:
    """Single-critic deterministic agent with Ornstein-Uhlenbeck exploration."""

    def __init__(self, obs_dim: int, act_dim: int, config: AgentConfig, seed: int | None = None):
        self.name = "ddpg"
        self.obs_dim = obs_dim
        self.act_dim = act_dim
        self.config = config
        rng = np.random.default_rng(seed)
        h = list(config.hidden)
        self.actor = Mlp([obs_dim] + h + [act_dim], config.activation, rng, final_scale=1e-2)
        self.critic = Mlp([obs_dim + act_dim] + h + [1], config.activation, rng)
        self.target_actor = self.actor.clone()
        self.target_critic = self.critic.clone()
        self.opt_actor = AdamState.for_params(self.actor.parameters(), config.lr_actor)
        self.opt_critic = AdamState.for_params(self.critic.parameters(), config.lr_critic)
        self.rng = rng
        self.ou_state = np.zeros(act_dim)
        self.actor_update_count = 0

    @property
    def network_count(self) -> int:
        return 4

    @property
    def networks(self) -> dict:
        return {
            "actor": self.actor,
            "critic": self.critic,
            "target_actor": self.target_actor,
            "target_critic": self.target_critic,
        }

    @property
    def opt_states(self) -> dict:
        return {"actor": self.opt_actor, "critic": self.opt_critic}

    def extra_state(self) -> dict:
        return {
            "actor_update_count": self.actor_update_count,
            "ou_state": self.ou_state.tolist(),
            "rng_state": copy.deepcopy(self.rng.bit_generator.state),
        }

    def load_extra_state(self, state: dict) -> None:
        self.actor_update_count = int(state["actor_update_count"])
        self.ou_state = np.array(state["ou_state"], dtype=float)
        self.rng.bit_generator.state = copy.deepcopy(state["rng_state"])

    def reset_noise(self) -> None:
        self.ou_state = np.zeros(self.act_dim)

    def select_action(self, state, mode: str = "explore") -> np.ndarray:
        states = np.atleast_2d(np.asarray(state, dtype=float))
        a = np.tanh(self.actor.forward(states))[0]
        if mode == "eval":
            return a
        cfg = self.config
        self.ou_state = (
            self.ou_state
            - cfg.ou_theta * self.ou_state
            + cfg.ou_sigma * self.rng.standard_normal(self.act_dim)
        )
        return np.clip(a + self.ou_state, -1.0, 1.0)

    def compute_target(self, rewards, next_states, dones) -> np.ndarray:
        a2 = np.tanh(self.target_actor.forward(next_states))
        x2 = np.concatenate([next_states, a2], axis=1)
        q = self.target_critic.forward(x2)[:, 0]
        mask = 1.0 - np.asarray(dones, dtype=float)
        return np.asarray(rewards, dtype=float) + mask * self.config.gamma * q

    def actor_update(self, batch: Batch) -> float:
        s = batch.states
        n = len(batch)
        pre, cache = self.actor.forward_cached(s)
        a = np.tanh(pre)
        q, dq_da = _critic_value_and_grad(self.critic, s, a)
        loss = float(-np.mean(q))
        upstream = -(dq_da / n) * (1.0 - a**2)
        grads = self.actor.gradients_flat(self.actor.backward(cache, upstream))
        grads = clip_gradients(grads, self.config.grad_clip)
        adam_step(self.actor.parameters(), grads, self.opt_actor)
        return loss

    def polyak_update(self) -> None:
        polyak_blend(self.target_actor, self.actor, self.config.tau)
        polyak_blend(self.target_critic, self.critic, self.config.tau)

    def train_step(self, buffer: ReplayBuffer, t: int):
        cfg = self.config
        if len(buffer) < cfg.batch_size:
            log.info("skipping update at t=%d: buffer %d < batch %d", t, len(buffer), cfg.batch_size)
            return None
        batch = buffer.sample(cfg.batch_size)
        y = self.compute_target(batch.rewards, batch.next_states, batch.dones)
        x = np.concatenate([batch.states, batch.actions], axis=1)
        q, cache = self.critic.forward_cached(x)
        err = q[:, 0] - y
        j_q = float(np.mean(err**2))
        grads = self.critic.gradients_flat(self.critic.backward(cache, (2.0 * err / len(err))[:, None]))
        grads = clip_gradients(grads, cfg.grad_clip)
        adam_step(self.critic.parameters(), grads, self.opt_critic)
        j_pi = self.actor_update(batch)
        self.polyak_update()
        self.actor_update_count += 1
        return {
            "j_q1": j_q,
            "j_q2": float("nan"),
            "j_pi": j_pi,
            "j_alpha": float("nan"),
            "alpha": float("nan"),
            "mean_q": float(np.mean(q)),
        }


ALGORITHMS = ("tdsac", "sac", "td3", "ddpg")


def make_agent(algorithm: str, obs_dim: int, act_dim: int,
               config: AgentConfig | None = None, seed: int | None = None):
    algorithm = algorithm.lower()
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; pick one of {ALGORITHMS}")
    cfg = config or PAPER_CONFIGS[algorithm]
    if algorithm in ("tdsac", "sac"):
        return SoftActorCriticAgent(obs_dim, act_dim, cfg, seed, name=algorithm)
    if algorithm == "td3":
        return Td3Agent(obs_dim, act_dim, cfg, seed)
    return DdpgAgent(obs_dim, act_dim, cfg, seed)
