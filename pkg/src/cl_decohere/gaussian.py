"""Closed-form evolution of one stretched Gaussian packet under friction,
thermal diffusion and a linear potential.

The density matrix in center-of-mass/relative coordinates (R = (x+x')/2,
r = x - x') keeps the form

    rho(R, r, t) = exp[a0(r,t) - (R - a1(r,t))^2 / (2 w_t^2)] / (sqrt(2 pi) w_t)

for all times; a0 collects the r-decay and drift phase, a1 the moving
center and the r-coupling that generates the probability current.  The
diagonal r = 0 yields a normalized Gaussian density of width w_t centered
on the classical trajectory x_t, and the current follows by one
r-derivative of rho.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kinematics as kin
from .errors import TrajectoryTerminated
from .model import Environment, GaussianPacket, ModelConstants

_DENSITY_FLOOR = 1e-300


@dataclass(frozen=True)
class EvolvedGaussian:
    """One packet bound to its environment; evaluates everything per time."""

    packet: GaussianPacket
    env: Environment
    constants: ModelConstants = ModelConstants()

    # -- kinematics ------------------------------------------------------
    def tau(self, t):
        return kin.relaxed_time(t, self.env.gamma)

    def center(self, t):
        return kin.classical_center(t, self.packet, self.env, self.constants)

    def width(self, t):
        return kin.width(t, self.packet, self.env, self.constants)

    def width_squared(self, t):
        return kin.width_squared(t, self.packet, self.env, self.constants)

    def center_velocity(self, t):
        return kin.center_velocity(t, self.packet, self.env, self.constants)

    def width_squared_rate(self, t):
        return kin.width_squared_rate(t, self.packet, self.env, self.constants)

    # -- kernel coefficients ---------------------------------------------
    def a0(self, r, t):
        """Exponent coefficient a0(r, t); vanishes at r = 0."""
        hbar, m = self.constants.hbar, self.constants.mass
        g = self.constants.g
        gamma = self.env.gamma
        D = self.env.diffusion(self.constants)
        t = np.asarray(t, dtype=float)
        tau = kin.relaxed_time(t, gamma)
        decay = np.exp(-4.0 * gamma * t) / (8.0 * self.packet.sigma0**2) + kin.relaxed_time_double(
            t, gamma
        ) * D / hbar**2
        drift = (self.packet.p0 / hbar) * np.exp(-2.0 * gamma * t) - (m * g / hbar) * tau
        return -decay * np.asarray(r) ** 2 + 1j * drift * np.asarray(r)

    def a1(self, r, t):
        """Exponent coefficient a1(r, t); equals x_t at r = 0."""
        hbar, m = self.constants.hbar, self.constants.mass
        gamma = self.env.gamma
        D = self.env.diffusion(self.constants)
        t = np.asarray(t, dtype=float)
        tau = kin.relaxed_time(t, gamma)
        e2 = np.exp(-2.0 * gamma * t)
        coupling = (
            hbar * e2 * tau / (4.0 * m * self.packet.sigma0**2)
            + (D / (m * hbar)) * tau * tau
            + 0.5 * self.packet.eta * e2
        )
        return self.center(t) + 1j * coupling * np.asarray(r)

    # -- fields ------------------------------------------------------------
    def density_matrix(self, R, r, t):
        """rho(R, r, t); Hermitian under r -> -r with conjugation."""
        w2 = self.width_squared(t)
        a0 = self.a0(r, t)
        a1 = self.a1(r, t)
        return np.exp(a0 - (np.asarray(R) - a1) ** 2 / (2.0 * w2)) / np.sqrt(2.0 * np.pi * w2)

    def current_matrix(self, R, r, t):
        """j(R, r, t) = -i (hbar/m) d rho / dr, taken on the exact exponent."""
        hbar, m = self.constants.hbar, self.constants.mass
        gamma = self.env.gamma
        g = self.constants.g
        D = self.env.diffusion(self.constants)
        t = np.asarray(t, dtype=float)
        tau = kin.relaxed_time(t, gamma)
        e2 = np.exp(-2.0 * gamma * t)
        w2 = self.width_squared(t)
        decay = np.exp(-4.0 * gamma * t) / (8.0 * self.packet.sigma0**2) + kin.relaxed_time_double(
            t, gamma
        ) * D / hbar**2
        da0 = -2.0 * decay * np.asarray(r) + 1j * (
            (self.packet.p0 / hbar) * e2 - (m * g / hbar) * tau
        )
        da1 = 1j * (
            hbar * e2 * tau / (4.0 * m * self.packet.sigma0**2)
            + (D / (m * hbar)) * tau * tau
            + 0.5 * self.packet.eta * e2
        )
        a1 = self.a1(r, t)
        slope = da0 + (np.asarray(R) - a1) / w2 * da1
        return -1j * (hbar / m) * slope * self.density_matrix(R, r, t)

    def probability_density(self, x, t):
        """P(x, t): normalized Gaussian, width w_t, center x_t."""
        w2 = self.width_squared(t)
        xt = self.center(t)
        return np.exp(-((np.asarray(x) - xt) ** 2) / (2.0 * w2)) / np.sqrt(2.0 * np.pi * w2)

    def probability_current(self, x, t):
        """J(x, t) = [dx_t/dt + (x - x_t) * d(w_t^2)/dt / (2 w_t^2)] P(x, t).

        This is the diagonal of the current matrix; the drift and shear
        contributions add, which the continuity equation pins down.
        """
        xt = self.center(t)
        w2 = self.width_squared(t)
        drift = self.center_velocity(t)
        shear = 0.5 * self.width_squared_rate(t) / w2
        return (drift + (np.asarray(x) - xt) * shear) * self.probability_density(x, t)

    def bohm_velocity(self, x, t):
        """Guidance field J/P; affine in x for a single Gaussian."""
        P = self.probability_density(x, t)
        if np.any(np.asarray(P) < _DENSITY_FLOOR):
            raise TrajectoryTerminated(f"density underflow at x={x}", time=t)
        xt = self.center(t)
        w2 = self.width_squared(t)
        return self.center_velocity(t) + (np.asarray(x) - xt) * (
            0.5 * self.width_squared_rate(t) / w2
        )

    def trajectory(self, c, t):
        """Exact Bohmian trajectory through quantile offset c: x_t + c w_t."""
        return self.center(t) + c * self.width(t)
