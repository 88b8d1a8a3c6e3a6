"""Closed-form decoherence scenarios for a particle in a thermal bath:
Gaussian packet dynamics, cat-state interference, Bohmian arrival times,
two identical particles and the quantum shutter."""

__version__ = "0.1.0"

from .errors import (
    ConsistencyError,
    ConvergenceError,
    DomainError,
    ScenarioError,
    TrajectoryTerminated,
)
from .model import (
    Environment,
    GaussianPacket,
    ModelConstants,
    Scenario,
    SpaceGrid,
    TimeGrid,
    diffusion_coefficient,
)

__all__ = [
    "ConsistencyError",
    "ConvergenceError",
    "DomainError",
    "Environment",
    "GaussianPacket",
    "ModelConstants",
    "Scenario",
    "ScenarioError",
    "SpaceGrid",
    "TimeGrid",
    "TrajectoryTerminated",
    "diffusion_coefficient",
    "__version__",
]
