"""Superposition of two symmetric Gaussian packets and its decoherence.

The pair is always the mirror pair (centers +-x0, kick momenta +-p0,
equal width and stretching); the interference term of the evolved
density is written as

    2 sqrt(P_aa P_bb) e^{Gamma(t)} cos Theta(x, t)

with closed forms for the decoherence function Gamma and the phase
Theta.  The phase-slope formulas here fix the relative sign between the
x0- and p0-carrying terms so that the cross term reproduces the evolved
cross density matrix exactly; the equivalent route through the pair
kernel (identical.py) and the closed-system limit both pin that sign.
Overall phase orientation is immaterial under the cosine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kinematics as kin
from .errors import DomainError
from .gaussian import EvolvedGaussian
from .model import Environment, GaussianPacket, ModelConstants


@dataclass(frozen=True)
class CatState:
    """Symmetric two-packet superposition with its normalization constant."""

    packet_a: GaussianPacket
    packet_b: GaussianPacket
    norm: float

    @classmethod
    def symmetric(cls, base: GaussianPacket, constants: ModelConstants = ModelConstants()):
        """Build the mirror pair (+x0, +p0) / (-x0, -p0) from one packet."""
        a = base
        b = GaussianPacket(-base.x0, -base.p0, base.sigma0, base.eta)
        hbar = constants.hbar
        s2 = base.sigma0**2
        overlap = math.exp(
            -base.x0**2 / (2.0 * s2)
            + 2.0 * base.p0 * base.x0 * base.eta / hbar
            - 2.0 * base.p0**2 * (1.0 + base.eta**2) * s2 / hbar**2
        )
        norm = 1.0 / math.sqrt(2.0 + 2.0 * overlap)
        return cls(a, b, norm)

    def require_symmetric(self):
        a, b = self.packet_a, self.packet_b
        if not (
            a.x0 == -b.x0 and a.p0 == -b.p0 and a.sigma0 == b.sigma0 and a.eta == b.eta
        ):
            raise DomainError("only the symmetric mirror pair is supported")


class CatDynamics:
    """Evolved cat state: density, decoherence and phase functions."""

    def __init__(
        self,
        cat: CatState,
        env: Environment,
        constants: ModelConstants = ModelConstants(),
    ):
        cat.require_symmetric()
        base = cat.packet_a
        if base.eta != 0.0 and constants.g != 0.0:
            raise DomainError("stretched pairs are only supported in free space (g = 0)")
        self.cat = cat
        self.env = env
        self.constants = constants
        self.branch_a = EvolvedGaussian(cat.packet_a, env, constants)
        self.branch_b = EvolvedGaussian(cat.packet_b, env, constants)

    # -- decoherence functions --------------------------------------------
    def gamma_min(self, t):
        """Decoherence function of the minimum-uncertainty pair.

        Exactly zero whenever D = 0 and independent of g; tends to the
        log-overlap of the initial packets as the width diverges.
        """
        base = self.cat.packet_a
        if base.eta != 0.0:
            raise DomainError("gamma_min needs a minimum-uncertainty pair (eta = 0)")
        return self._gamma_min_of(t, base)

    def _gamma_min_of(self, t, base):
        hbar, m = self.constants.hbar, self.constants.mass
        s2 = base.sigma0**2
        tau = kin.relaxed_time(t, self.env.gamma)
        sigma_t2 = kin.width_squared(
            t, GaussianPacket(base.x0, base.p0, base.sigma0, 0.0), self.env, self.constants
        )
        prefactor = base.x0**2 / (2.0 * s2) + 2.0 * base.p0**2 * s2 / hbar**2
        bracket = 1.0 - (s2 / sigma_t2) * (1.0 + (hbar * tau) ** 2 / (4.0 * m * m * s2 * s2))
        return -prefactor * bracket

    def gamma_stretched(self, t):
        """Decoherence function of the stretched pair in free space.

        Reduces exactly to gamma_min at eta = 0 and to the motionless
        closed form at p0 = 0; the x0*p0 cross terms carry the sign that
        matches the evolved cross density matrix.
        """
        base = self.cat.packet_a
        hbar, m = self.constants.hbar, self.constants.mass
        x0, p0, eta = base.x0, base.p0, base.eta
        s2 = base.sigma0**2
        tau = kin.relaxed_time(t, self.env.gamma)
        w2 = kin.width_squared(t, base, self.env, self.constants)
        prefactor = x0**2 / (2.0 * s2) + 2.0 * p0**2 * s2 / hbar**2
        gamma0 = -prefactor * (
            1.0 - (s2 / w2) * (1.0 + (hbar * tau) ** 2 / (4.0 * m * m * s2 * s2))
        )
        poly = (
            hbar**3 * x0 * (m * x0 - p0 * tau) * tau
            + eta * hbar**2 * (m * m * x0 * x0 - 4.0 * m * x0 * p0 * tau + p0 * p0 * tau * tau) * s2
            - 4.0 * (1.0 + eta * eta) * hbar * m * p0 * (m * x0 - p0 * tau) * s2 * s2
            + 4.0 * eta * (2.0 + eta * eta) * m * m * p0 * p0 * s2**3
        )
        linear = 2.0 * p0 * (hbar * x0 - eta * p0 * s2) / hbar**2
        return gamma0 + eta * (linear + poly / (2.0 * hbar**2 * m * m * s2 * w2))

    def gamma(self, t):
        """Decoherence function appropriate to the pair's stretching."""
        if self.cat.packet_a.eta == 0.0:
            return self.gamma_min(t)
        return self.gamma_stretched(t)

    def attenuation(self, t):
        """Interference contrast a(t) = e^{Gamma(t)} in (0, 1]."""
        return np.exp(self.gamma(t))

    # -- phase --------------------------------------------------------------
    def pattern_shift(self, t):
        """Fringe-pattern displacement under the constant force."""
        return -self.constants.g * kin.fall_kernel(t, self.env.gamma)

    def phase_slope(self, t):
        """beta(t): fringe wavenumber is |beta|/w_t^2, spacing 2 pi w_t^2/|beta|."""
        base = self.cat.packet_a
        hbar, m = self.constants.hbar, self.constants.mass
        x0, p0, eta = base.x0, base.p0, base.eta
        s2 = base.sigma0**2
        tau = kin.relaxed_time(t, self.env.gamma)
        beta_min = x0 * hbar * tau / (2.0 * m * s2) - 2.0 * p0 * s2 / hbar
        if eta == 0.0:
            return beta_min
        return beta_min + (x0 - (p0 / m) * tau) * eta - (2.0 * p0 * s2 / hbar) * eta**2

    def phase(self, x, t):
        """Theta(x, t) = beta(t) (x - shift(t)) / w_t^2."""
        w2 = self.branch_a.width_squared(t)
        return self.phase_slope(t) * (np.asarray(x) - self.pattern_shift(t)) / w2

    def fringe_spacing(self, t):
        beta = self.phase_slope(t)
        if beta == 0.0:
            return math.inf
        return 2.0 * math.pi * self.branch_a.width_squared(t) / abs(beta)

    # -- density -------------------------------------------------------------
    def cross_term(self, x, t):
        """Interference contribution 2 sqrt(P_aa P_bb) e^Gamma cos Theta."""
        Paa = self.branch_a.probability_density(x, t)
        Pbb = self.branch_b.probability_density(x, t)
        return 2.0 * np.sqrt(Paa * Pbb) * np.exp(self.gamma(t)) * np.cos(self.phase(x, t))

    def density(self, x, t):
        """Normalized cat density N^2 (P_aa + P_bb + cross)."""
        Paa = self.branch_a.probability_density(x, t)
        Pbb = self.branch_b.probability_density(x, t)
        return self.cat.norm**2 * (Paa + Pbb + self.cross_term(x, t))


def gamma_zero_dissipation(t, cat: CatState, env: Environment, constants: ModelConstants = ModelConstants()):
    """Rational small-friction approximation of the decoherence function."""
    cat.require_symmetric()
    base = cat.packet_a
    hbar, m = constants.hbar, constants.mass
    D = env.diffusion(constants)
    s2 = base.sigma0**2
    t = np.asarray(t, dtype=float)
    num = 4.0 * D * base.x0**2 * t**3
    den = (
        12.0 * m * m * s2 * s2 * (1.0 + base.eta**2)
        + 12.0 * m * hbar * base.eta * s2 * t
        + 3.0 * hbar**2 * t * t
        + 8.0 * D * s2 * t**3
    )
    val = -num / den
    return float(val) if val.ndim == 0 else val


def decoherence_time(env: Environment, d: float, constants: ModelConstants = ModelConstants()):
    """Timescale 3 hbar^2 / (2 m gamma kT d^2) for separation d = 2 x0."""
    if env.gamma <= 0.0 or env.kT <= 0.0:
        raise DomainError("decoherence time needs gamma > 0 and kT > 0")
    if d <= 0.0:
        raise DomainError("separation d must be positive")
    return 3.0 * constants.hbar**2 / (2.0 * constants.mass * env.gamma * env.kT * d * d)
