"""Network-slicing reinforcement-learning testbed.

A seeded C-RAN radio/energy simulation wrapped as a fixed-horizon control
environment, a family of off-policy continuous-control agents (TDSAC,
DDPG, TD3, SAC) built on an in-package MLP/ADAM core, and a CLI harness
for training, evaluation and plotting.
"""

__version__ = "0.1.0"

from .env import EnvConfig, SliceEnv, SliceSpec  # noqa: F401
from .agents import make_agent  # noqa: F401
