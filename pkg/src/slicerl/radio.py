"""Downlink C-RAN radio layer: channels, beamforming, SINR and AP power.

Everything here is a pure function of its arguments; randomness enters only
through an explicitly passed numpy Generator, so a (topology, seed) pair
always reproduces the same channel realization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg  # noqa: F401  (kept for solve fallback on older numpy)

# Minimum AP-user distance in km; the uniform distance sampler is floored
# here because the path-loss formula diverges at d = 0.
MIN_DISTANCE_KM = 0.01


def dbm_to_watts(dbm: float) -> float:
    """Convert a dBm figure to linear watts (10^((dBm-30)/10))."""
    return 10.0 ** ((dbm - 30.0) / 10.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def path_loss_db(d_km, log_base: int = 2):
    """Path loss 148.1 + 37.6*log(d) in dB at distance d (km).

    The default uses the base-2 logarithm; ``log_base=10`` selects the
    classical base-10 form with the same constants.  Accepts scalars or
    arrays; all distances must be strictly positive.
    """
    d = np.asarray(d_km, dtype=float)
    if np.any(d <= 0.0):
        raise ValueError("path loss requires strictly positive distance")
    if log_base == 2:
        lg = np.log2(d)
    elif log_base == 10:
        lg = np.log10(d)
    else:
        raise ValueError(f"unsupported log base {log_base!r}")
    out = 148.1 + 37.6 * lg
    return float(out) if np.isscalar(d_km) else out


@dataclass
class RadioTopology:
    """Static geometry and radio constants for one set of served users.

    ``distances`` is n_aps x n_users_max in km.  ``reg_noise`` is the
    regularization variance used by the beamformer; ``None`` means "use the
    linear noise power".
    """

    n_aps: int
    n_users_max: int
    distances: np.ndarray
    antenna_gain_dbi: float = 9.0
    shadowing_std_db: float = 8.0
    noise_dbm: float = -102.0
    bandwidth_hz: float = 10e6
    p_max_watts: float = 1.0
    reg_noise: float | None = None
    path_loss_log_base: int = 2

    def __post_init__(self):
        self.distances = np.asarray(self.distances, dtype=float)
        if self.n_aps < 1 or self.n_users_max < 1:
            raise ValueError("need at least one AP and one user slot")
        if self.p_max_watts <= 0:
            raise ValueError("p_max_watts must be positive")
        if self.distances.shape != (self.n_aps, self.n_users_max):
            raise ValueError(
                f"distances shape {self.distances.shape} != "
                f"({self.n_aps}, {self.n_users_max})"
            )
        if np.any(self.distances < 0):
            raise ValueError("distances must be non-negative")

    @property
    def noise_watts(self) -> float:
        return dbm_to_watts(self.noise_dbm)

    @property
    def beamformer_reg(self) -> float:
        return self.noise_watts if self.reg_noise is None else self.reg_noise


def sample_distances(n_aps: int, n_users: int, rng: np.random.Generator) -> np.ndarray:
    """Draw AP-user distances uniformly on [0, 0.6] km, floored at 10 m."""
    d = rng.uniform(0.0, 0.6, size=(n_aps, n_users))
    return np.maximum(d, MIN_DISTANCE_KM)


@dataclass
class ChannelMatrix:
    """One channel realization; column m is the gain vector of user m.

    The raw shadowing and small-scale draws are kept so tests can rebuild
    each entry from its factors.
    """

    gains: np.ndarray
    small_scale: np.ndarray = field(default=None, repr=False)
    shadowing_linear: np.ndarray = field(default=None, repr=False)

    @property
    def n_aps(self) -> int:
        return self.gains.shape[0]

    @property
    def n_users(self) -> int:
        return self.gains.shape[1]


def draw_channel(topology: RadioTopology, rng: np.random.Generator) -> ChannelMatrix:
    """Realize h = 10^(-L/20) * sqrt(gain * shadowing) * g per AP-user pair.

    Shadowing is log-normal with the configured dB spread, g is CN(0, 1).
    """
    n, m = topology.n_aps, topology.n_users_max
    loss_db = path_loss_db(topology.distances, topology.path_loss_log_base)
    amp = 10.0 ** (-loss_db / 20.0)
    gain_lin = db_to_linear(topology.antenna_gain_dbi)
    shadow_db = rng.normal(0.0, topology.shadowing_std_db, size=(n, m))
    shadow_lin = 10.0 ** (shadow_db / 10.0)
    g = (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2.0)
    gains = amp * np.sqrt(gain_lin * shadow_lin) * g
    return ChannelMatrix(gains=gains, small_scale=g, shadowing_linear=shadow_lin)


@dataclass
class BeamformingSet:
    """Precoding vectors (columns) and the per-user powers they carry."""

    vectors: np.ndarray
    powers: np.ndarray

    @property
    def n_aps(self) -> int:
        return self.vectors.shape[0]

    @property
    def n_users(self) -> int:
        return self.vectors.shape[1]


def beamform(H: ChannelMatrix | np.ndarray, powers, reg_noise: float) -> BeamformingSet:
    """Regularized zero-forcing: v_m = sqrt(p_m) * normalize(A^-1 h_m).

    A = I + sum_j h_j h_j^H / reg_noise.  A is positive definite by
    construction, so the solve cannot fail.  Zero-power users get a zero
    column.
    """
    gains = H.gains if isinstance(H, ChannelMatrix) else np.asarray(H)
    powers = np.asarray(powers, dtype=float)
    n, m = gains.shape
    if powers.shape != (m,):
        raise ValueError(f"powers shape {powers.shape} != ({m},)")
    if np.any(powers < 0):
        raise ValueError("powers must be non-negative")
    if not np.all(np.isfinite(gains)):
        raise ValueError("channel gains must be finite")
    if reg_noise <= 0:
        raise ValueError("reg_noise must be positive")

    A = np.eye(n, dtype=complex) + (gains @ gains.conj().T) / reg_noise
    directions = np.linalg.solve(A, gains)
    norms = np.linalg.norm(directions, axis=0)
    norms = np.where(norms > 0, norms, 1.0)
    vectors = directions / norms * np.sqrt(powers)
    return BeamformingSet(vectors=vectors, powers=powers.copy())


def sinr(H: ChannelMatrix | np.ndarray, V: BeamformingSet, noise_w: float, m: int) -> float:
    """SINR of user m: |h_m^H v_m|^2 over interference plus noise."""
    return float(sinr_all(H, V, noise_w)[m])


def sinr_all(H: ChannelMatrix | np.ndarray, V: BeamformingSet, noise_w: float) -> np.ndarray:
    """Vectorized SINR for every user at once."""
    gains = H.gains if isinstance(H, ChannelMatrix) else np.asarray(H)
    cross = np.abs(gains.conj().T @ V.vectors) ** 2  # [m, j] = |h_m^H v_j|^2
    signal = np.diag(cross)
    interference = cross.sum(axis=1) - signal
    return signal / (interference + noise_w)


def rate(sinr_value):
    """Achievable rate log(1 + SINR) in nats per channel use."""
    s = np.asarray(sinr_value, dtype=float)
    if np.any(s < 0):
        raise ValueError("SINR must be non-negative")
    out = np.log1p(s)
    return float(out) if np.isscalar(sinr_value) else out


def ap_power(V: BeamformingSet, n: int) -> float:
    """Transmit power of AP n: sum over users of |v_{n,m}|^2."""
    if not 0 <= n < V.n_aps:
        raise IndexError(f"AP index {n} out of range")
    return float(np.sum(np.abs(V.vectors[n, :]) ** 2))
