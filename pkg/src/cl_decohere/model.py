"""Shared value types: physical constants, environment, initial states, grids.

All types are immutable after construction and safe to share between
workers.  Units follow the convention hbar = m = 1 in every shipped
scenario, but hbar and m stay symbolic in all formulas so dimensional
scaling can be tested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ScenarioError

SCENARIO_KINDS = (
    "arrival",
    "cat",
    "stretch-cat",
    "identical-single",
    "identical-joint",
    "shutter",
    "trajectories",
    "residual-check",
)

STATISTICS = ("boson", "fermion", "maxwell-boltzmann")


@dataclass(frozen=True)
class ModelConstants:
    """hbar, mass and the strength g of the linear potential V(x) = m*g*x."""

    hbar: float = 1.0
    mass: float = 1.0
    g: float = 0.0

    def __post_init__(self):
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise DomainError(f"hbar must be positive and finite, got {self.hbar}")
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise DomainError(f"mass must be positive and finite, got {self.mass}")
        if not math.isfinite(self.g):
            raise DomainError(f"g must be finite, got {self.g}")


@dataclass(frozen=True)
class Environment:
    """Thermal bath parameters: relaxation rate gamma and temperature kT.

    The diffusion coefficient D = 2*m*gamma*kT is derived, never stored,
    so it can never drift out of sync with (gamma, kT).
    """

    gamma: float
    kT: float

    def __post_init__(self):
        if self.gamma < 0 or not math.isfinite(self.gamma):
            raise DomainError(f"relaxation rate must be >= 0, got {self.gamma}")
        if self.kT < 0 or not math.isfinite(self.kT):
            raise DomainError(f"temperature kT must be >= 0, got {self.kT}")

    def diffusion(self, constants: ModelConstants) -> float:
        return diffusion_coefficient(self, constants)


def diffusion_coefficient(env: Environment, constants: ModelConstants) -> float:
    """Momentum diffusion coefficient D = 2*m*gamma*kT.

    Vanishes in the closed-system limit (gamma = 0 or kT = 0); bilinear
    in gamma and kT.
    """
    return 2.0 * constants.mass * env.gamma * env.kT


@dataclass(frozen=True)
class GaussianPacket:
    """Initial Gaussian wave packet.

    ``eta`` is the stretching parameter: the position spread is
    sigma0*sqrt(1+eta^2) while the momentum spread stays hbar/(2*sigma0),
    so eta != 0 lifts the state off minimum uncertainty.
    """

    x0: float = 0.0
    p0: float = 0.0
    sigma0: float = 1.0
    eta: float = 0.0

    def __post_init__(self):
        if not (self.sigma0 > 0 and math.isfinite(self.sigma0)):
            raise DomainError(f"sigma0 must be positive, got {self.sigma0}")
        for name in ("x0", "p0", "eta"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    def position_uncertainty(self, constants: ModelConstants = ModelConstants()) -> float:
        return self.sigma0 * math.sqrt(1.0 + self.eta**2)

    def momentum_uncertainty(self, constants: ModelConstants = ModelConstants()) -> float:
        return constants.hbar / (2.0 * self.sigma0)

    def uncertainty_product(self, constants: ModelConstants = ModelConstants()) -> float:
        """Delta x * Delta p = (hbar/2) sqrt(1+eta^2); hbar/2 iff eta = 0."""
        return self.position_uncertainty(constants) * self.momentum_uncertainty(constants)

    def initial_amplitude(self, x, constants: ModelConstants = ModelConstants()):
        """Complex wave function psi0(x) of this packet."""
        x = np.asarray(x, dtype=float)
        s2 = self.sigma0**2
        shape = 1.0 + 1j * self.eta
        norm = (2.0 * np.pi * s2 * shape**2) ** (-0.25)
        return norm * np.exp(
            -((x - self.x0) ** 2) / (4.0 * s2 * shape)
            + 1j * self.p0 * x / constants.hbar
        )


def _uniform_grid(lo: float, hi: float, count: int, what: str) -> np.ndarray:
    if count < 2:
        raise DomainError(f"{what} needs count >= 2, got {count}")
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"{what} needs min < max, got [{lo}, {hi}]")
    return np.linspace(lo, hi, count)


@dataclass(frozen=True)
class SpaceGrid:
    min: float
    max: float
    count: int

    def points(self) -> np.ndarray:
        return _uniform_grid(self.min, self.max, self.count, "SpaceGrid")

    @property
    def spacing(self) -> float:
        return (self.max - self.min) / (self.count - 1)


@dataclass(frozen=True)
class TimeGrid:
    min: float
    max: float
    count: int

    def points(self) -> np.ndarray:
        return _uniform_grid(self.min, self.max, self.count, "TimeGrid")

    @property
    def spacing(self) -> float:
        return (self.max - self.min) / (self.count - 1)


# Required fields per scenario kind, checked in Scenario.validate().
_NEEDS = {
    "arrival": {"packets": 1, "detector": True},
    "cat": {"packets": 2, "space": True, "times": True},
    "stretch-cat": {"packets": 2, "times": True},
    "identical-single": {"packets": (2, 4), "space": True, "times": True, "statistics": True},
    "identical-joint": {"packets": (2, 4), "space": True, "times": True, "statistics": True},
    "shutter": {"wavenumber": True, "space": True, "times": True},
    "trajectories": {"packets": (1, 2), "times": True},
    "residual-check": {"packets": 1},
}


@dataclass(frozen=True)
class Scenario:
    """Complete description of one computation the CLI can run."""

    kind: str
    constants: ModelConstants = field(default_factory=ModelConstants)
    environment: Environment = field(default_factory=lambda: Environment(0.0, 0.0))
    packets: tuple = ()
    space: SpaceGrid | None = None
    times: TimeGrid | None = None
    detector: float | None = None
    wavenumber: float | None = None
    statistics: str | None = None

    def validate(self) -> None:
        if self.kind not in SCENARIO_KINDS:
            raise ScenarioError(f"unknown scenario kind {self.kind!r}")
        needs = _NEEDS[self.kind]
        npk = needs.get("packets", 0)
        allowed = npk if isinstance(npk, tuple) else (npk,)
        if len(self.packets) not in allowed:
            raise ScenarioError(
                f"{self.kind} scenario needs {allowed} packet(s), got {len(self.packets)}"
            )
        if needs.get("detector") and self.detector is None:
            raise ScenarioError(f"{self.kind} scenario needs a detector position")
        if needs.get("wavenumber"):
            if self.wavenumber is None or not self.wavenumber > 0:
                raise ScenarioError(f"{self.kind} scenario needs wavenumber k > 0")
        if needs.get("space") and self.space is None:
            raise ScenarioError(f"{self.kind} scenario needs a space grid")
        if needs.get("times") and self.times is None:
            raise ScenarioError(f"{self.kind} scenario needs a time grid")
        if needs.get("statistics") and self.statistics not in STATISTICS:
            raise ScenarioError(
                f"{self.kind} scenario needs statistics in {STATISTICS}, got {self.statistics!r}"
            )
        if self.constants.g != 0.0 and self.kind not in ("cat", "residual-check"):
            raise ScenarioError(f"nonzero g is only supported by the cat scenario, not {self.kind}")
