"""Dense-network machinery: MLPs with exact reverse-mode gradients, ADAM,
and reparameterized squashed-Gaussian sampling.

Everything is float64 numpy.  Gradients are computed analytically layer by
layer; the input gradient is exposed because the policy update needs the
gradient of the critic with respect to the action.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

LOG_2PI = float(np.log(2.0 * np.pi))
SQUASH_EPS = 1e-6

_ACTIVATION_TAGS = {"relu": 0, "gelu": 1}
_TAG_ACTIVATIONS = {v: k for k, v in _ACTIVATION_TAGS.items()}


def gelu(x):
    """Exact GELU: x * Phi(x) with the standard normal CDF."""
    x = np.asarray(x, dtype=float)
    return x * 0.5 * (1.0 + erf(x / np.sqrt(2.0)))


def gelu_grad(x):
    x = np.asarray(x, dtype=float)
    cdf = 0.5 * (1.0 + erf(x / np.sqrt(2.0)))
    pdf = np.exp(-0.5 * x * x) / np.sqrt(2.0 * np.pi)
    return cdf + x * pdf


def relu(x):
    return np.maximum(x, 0.0)


def relu_grad(x):
    return (np.asarray(x) > 0).astype(float)


_ACT = {"relu": (relu, relu_grad), "gelu": (gelu, gelu_grad)}


@dataclass
class MlpGradients:
    d_weights: list
    d_biases: list
    d_input: np.ndarray


class Mlp:
    """Fully connected net: affine + activation on every layer but the last.

    ``layer_sizes`` runs input width to output width.  ``final_scale``
    shrinks the last layer's initialization (used to keep initial policy
    outputs near zero).
    """

    def __init__(self, layer_sizes, activation="gelu", rng=None, final_scale=1.0):
        if len(layer_sizes) < 2:
            raise ValueError("need at least input and output widths")
        if activation not in _ACT:
            raise ValueError(f"unknown activation {activation!r}")
        self.layer_sizes = list(int(s) for s in layer_sizes)
        self.activation = activation
        rng = rng or np.random.default_rng()
        self.weights = []
        self.biases = []
        n_layers = len(self.layer_sizes) - 1
        for k in range(n_layers):
            fan_in, fan_out = self.layer_sizes[k], self.layer_sizes[k + 1]
            bound = 1.0 / np.sqrt(fan_in)
            w = rng.uniform(-bound, bound, size=(fan_in, fan_out))
            b = rng.uniform(-bound, bound, size=fan_out)
            if k == n_layers - 1 and final_scale != 1.0:
                w *= final_scale
                b *= final_scale
            self.weights.append(w)
            self.biases.append(b)

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    def parameters(self) -> list:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self.forward_cached(x)[0]

    def forward_cached(self, x: np.ndarray):
        """Forward pass returning the output and the cache backward needs."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.layer_sizes[0]:
            raise ValueError(
                f"input width {x.shape[1]} != expected {self.layer_sizes[0]}"
            )
        act, _ = _ACT[self.activation]
        inputs = [x]
        pre_acts = []
        h = x
        for k in range(self.n_layers):
            z = h @ self.weights[k] + self.biases[k]
            pre_acts.append(z)
            h = act(z) if k < self.n_layers - 1 else z
            if k < self.n_layers - 1:
                inputs.append(h)
        return h, (inputs, pre_acts)

    def backward(self, cache, upstream_gradient: np.ndarray) -> MlpGradients:
        """Exact reverse-mode gradients for the cached forward pass."""
        inputs, pre_acts = cache
        _, act_grad = _ACT[self.activation]
        g = np.atleast_2d(np.asarray(upstream_gradient, dtype=float))
        d_w = [None] * self.n_layers
        d_b = [None] * self.n_layers
        for k in range(self.n_layers - 1, -1, -1):
            d_w[k] = inputs[k].T @ g
            d_b[k] = g.sum(axis=0)
            g = g @ self.weights[k].T
            if k > 0:
                g = g * act_grad(pre_acts[k - 1])
        return MlpGradients(d_weights=d_w, d_biases=d_b, d_input=g)

    def gradients_flat(self, grads: MlpGradients) -> list:
        out = []
        for dw, db in zip(grads.d_weights, grads.d_biases):
            out.extend((dw, db))
        return out

    def copy_from(self, other: "Mlp") -> None:
        for k in range(self.n_layers):
            self.weights[k][...] = other.weights[k]
            self.biases[k][...] = other.biases[k]

    def clone(self) -> "Mlp":
        out = Mlp(self.layer_sizes, self.activation)
        out.copy_from(self)
        return out

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.parameters())


def polyak_blend(target: Mlp, online: Mlp, tau: float) -> None:
    """target <- tau * online + (1 - tau) * target, parameter by parameter."""
    for pt, po in zip(target.parameters(), online.parameters()):
        pt *= 1.0 - tau
        pt += tau * po


@dataclass
class AdamState:
    """Per-parameter-list ADAM moments with bias correction."""

    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step_count: int = 0
    first_moment: list = field(default_factory=list)
    second_moment: list = field(default_factory=list)

    @classmethod
    def for_params(cls, params, learning_rate=1e-3, beta1=0.9, beta2=0.999):
        return cls(
            learning_rate=learning_rate,
            beta1=beta1,
            beta2=beta2,
            first_moment=[np.zeros_like(p) for p in params],
            second_moment=[np.zeros_like(p) for p in params],
        )


def adam_step(params, grads, state: AdamState) -> None:
    """One in-place bias-corrected ADAM update."""
    if len(params) != len(grads):
        raise ValueError("params and grads length mismatch")
    state.step_count += 1
    t = state.step_count
    b1, b2 = state.beta1, state.beta2
    for p, g, m, v in zip(params, grads, state.first_moment, state.second_moment):
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        m_hat = m / (1.0 - b1**t)
        v_hat = v / (1.0 - b2**t)
        p -= state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)


def clip_gradients(grads, max_norm: float):
    """Global-norm gradient clipping across a list of arrays."""
    total = np.sqrt(sum(float(np.sum(g * g)) for g in grads))
    if max_norm > 0 and total > max_norm:
        scale = max_norm / total
        grads = [g * scale for g in grads]
    return grads


def gaussian_log_prob(u, mean, log_std):
    """Elementwise log density of N(mean, exp(log_std)^2) at u."""
    var = np.exp(2.0 * log_std)
    return -0.5 * ((u - mean) ** 2 / var + 2.0 * log_std + LOG_2PI)


def sample_squashed_gaussian(mean, log_std, noise):
    """Tanh-squashed Gaussian sample with the change-of-variables log-prob.

    u = mean + exp(log_std) * noise; action = tanh(u).  The log-prob sums
    over the action dimensions (last axis).
    """
    mean = np.asarray(mean, dtype=float)
    log_std = np.asarray(log_std, dtype=float)
    noise = np.asarray(noise, dtype=float)
    std = np.exp(log_std)
    u = mean + std * noise
    action = np.tanh(u)
    log_prob = gaussian_log_prob(u, mean, log_std) - np.log(1.0 - action**2 + SQUASH_EPS)
    return action, log_prob.sum(axis=-1)


# -- checkpoint format -------------------------------------------------------
#
# Binary layout (little endian):
#   magic 'MLPC' | u32 version | u32 header_crc32 | u32 header_len | header
#   header: u8 activation tag | u32 n_sizes | u32 sizes...
#   payload: per layer, W then b as raw <f8 arrays in C order.

_MAGIC = b"MLPC"
_VERSION = 1


def save_mlp(net: Mlp, fileobj) -> None:
    header = struct.pack(
        f"<BI{len(net.layer_sizes)}I",
        _ACTIVATION_TAGS[net.activation],
        len(net.layer_sizes),
        *net.layer_sizes,
    )
    fileobj.write(_MAGIC)
    fileobj.write(struct.pack("<II", _VERSION, zlib.crc32(header)))
    fileobj.write(struct.pack("<I", len(header)))
    fileobj.write(header)
    for w, b in zip(net.weights, net.biases):
        fileobj.write(np.ascontiguousarray(w, dtype="<f8").tobytes())
        fileobj.write(np.ascontiguousarray(b, dtype="<f8").tobytes())


def load_mlp(fileobj) -> Mlp:
    if fileobj.read(4) != _MAGIC:
        raise ValueError("not an MLP checkpoint")
    version, crc = struct.unpack("<II", fileobj.read(8))
    if version != _VERSION:
        raise ValueError(f"unsupported checkpoint version {version}")
    (header_len,) = struct.unpack("<I", fileobj.read(4))
    header = fileobj.read(header_len)
    if zlib.crc32(header) != crc:
        raise ValueError("checkpoint header checksum mismatch")
    tag, n_sizes = struct.unpack("<BI", header[:5])
    sizes = struct.unpack(f"<{n_sizes}I", header[5 : 5 + 4 * n_sizes])
    net = Mlp(sizes, activation=_TAG_ACTIVATIONS[tag])
    for k in range(net.n_layers):
        w_shape = (sizes[k], sizes[k + 1])
        w = np.frombuffer(fileobj.read(8 * w_shape[0] * w_shape[1]), dtype="<f8")
        b = np.frombuffer(fileobj.read(8 * w_shape[1]), dtype="<f8")
        net.weights[k] = w.reshape(w_shape).copy()
        net.biases[k] = b.copy()
    return net
