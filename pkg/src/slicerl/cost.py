"""Cross-layer cost model: CPU fractions, processor/VNF energy, totals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .radio import BeamformingSet


@dataclass
class ComputeModel:
    """Coefficients of the compute/energy model.

    theta_hat, c0 and delta are experimental knobs (cores per nat, constant
    cores, cores per active AP link).  iota * p_z^3 is the per-processor
    energy; psi_vnf is the flat deployment cost of one VNF instance.
    """

    theta_hat: float = 0.2
    c0: float = 0.1
    delta: float = 0.01
    active_link_epsilon: float = 1e-9
    iota: float = 1e-26
    p_z: float = 1e9
    psi_vnf: float = 5.0
    max_vnfs: int = 8
    max_cpus: int = 32
    vnf_capacity_cores: float = 2.0

    def __post_init__(self):
        if min(self.theta_hat, self.c0, self.delta, self.iota, self.psi_vnf) < 0:
            raise ValueError("cost coefficients must be non-negative")
        if self.p_z <= 0 or self.vnf_capacity_cores <= 0:
            raise ValueError("p_z and vnf_capacity_cores must be positive")
        if self.max_vnfs < 1 or self.max_cpus < 1:
            raise ValueError("need at least one VNF slot and one CPU")

    @property
    def cpu_energy_w(self) -> float:
        return self.iota * self.p_z**3


@dataclass
class CostBreakdown:
    """Eq-style two-part energy total plus the compute bookkeeping behind it."""

    baseband_w: float
    transmission_w: float
    total_w: float
    cpu_demand_cores: float
    active_cpus: int
    active_vnfs: int
    capacity_exceeded: bool = False


def cpu_fraction(rate_m: float, v_column_m: np.ndarray, model: ComputeModel) -> float:
    """CPU cores consumed by one user.

    Baseband part scales with the rate (plus the constant FFT term); the
    transmission part adds ``delta`` per AP link whose beamforming weight
    magnitude exceeds the active-link threshold.
    """
    if rate_m < 0:
        raise ValueError("rate must be non-negative")
    active_links = int(np.sum(np.abs(np.asarray(v_column_m)) > model.active_link_epsilon))
    return model.theta_hat * rate_m + model.c0 + model.delta * active_links


def network_energy(V: BeamformingSet | None, deltas, model: ComputeModel) -> CostBreakdown:
    """Total network energy split into baseband and transmission parts.

    Active CPU / VNF counts follow the aggregate core demand via ceilings,
    clamped to the physical maxima.  Demand above the CPU pool is not an
    error; it is flagged for the environment's constraint logic.
    """
    deltas = np.asarray(deltas, dtype=float)
    demand = float(deltas.sum()) if deltas.size else 0.0
    if demand < 0:
        raise ValueError("negative CPU demand")
    active_cpus = min(math.ceil(demand), model.max_cpus)
    active_vnfs = min(math.ceil(demand / model.vnf_capacity_cores), model.max_vnfs)
    baseband = active_cpus * model.cpu_energy_w + active_vnfs * model.psi_vnf
    if V is not None and V.vectors.size:
        if deltas.size and deltas.shape[0] != V.n_users:
            raise ValueError("deltas and beamforming user counts differ")
        transmission = float(np.sum(np.abs(V.vectors) ** 2))
    else:
        transmission = 0.0
    return CostBreakdown(
        baseband_w=baseband,
        transmission_w=transmission,
        total_w=baseband + transmission,
        cpu_demand_cores=demand,
        active_cpus=active_cpus,
        active_vnfs=active_vnfs,
        capacity_exceeded=demand > model.max_cpus,
    )


def normalized_cost(breakdown: CostBreakdown, n_users: int) -> float:
    """Per-user network cost (watts per served user)."""
    if n_users < 1:
        raise ValueError("normalized cost needs at least one user")
    return breakdown.total_w / n_users
