"""Two identical particles built from one-particle cross-density kernels.

Every quantity reduces bilinearly to the evolved cross density of two
minimum-uncertainty packets,

    P_12(x, t) = sqrt(2 s sb/(s^2+sb^2)) / (2 sqrt(pi b2))
                 * exp[b0 - (x - b1)^2 / (4 b2)],

whose coefficients b0, b1(t), b2(t) are closed forms in the damped-time
kernels.  The matching cross current J_12 is not expressible from the
diagonal alone; it comes from the quadratic-form evolution engine
(gaussform), which propagates the full off-diagonal kernel exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kinematics as kin
from .errors import DomainError
from .gaussform import evolved_cross_form
from .model import Environment, GaussianPacket, ModelConstants


def _require_min_uncertainty(*packets):
    for p in packets:
        if p.eta != 0.0:
            raise DomainError("two-particle kernels need minimum-uncertainty packets (eta = 0)")


def pair_coefficients(
    ket: GaussianPacket,
    bra: GaussianPacket,
    t,
    env: Environment,
    constants: ModelConstants = ModelConstants(),
):
    """Coefficients (b0, b1(t), b2(t)) of the evolved cross density."""
    _require_min_uncertainty(ket, bra)
    hbar, m = constants.hbar, constants.mass
    x0, p0, s0 = ket.x0, ket.p0, ket.sigma0
    xb, pb, sb = bra.x0, bra.p0, bra.sigma0
    S = s0 * s0 + sb * sb
    D = env.diffusion(constants)
    tau = kin.relaxed_time(t, env.gamma)
    b0 = -(
        hbar**2 * (x0 - xb) ** 2
        + 4.0 * (p0 - pb) ** 2 * s0 * s0 * sb * sb
        - 4j * hbar * (p0 - pb) * (x0 * sb * sb + xb * s0 * s0)
    ) / (4.0 * hbar**2 * S)
    b1 = (
        (x0 * sb * sb + xb * s0 * s0) / S
        + (pb * sb * sb + p0 * s0 * s0) * tau / (m * S)
        - 1j
        * (
            hbar * tau * (x0 - xb) / (2.0 * m * S)
            + 2.0 * (pb - p0) * s0 * s0 * sb * sb / (hbar * S)
        )
    )
    b2 = (
        s0 * s0 * sb * sb / S
        + (hbar * tau) ** 2 / (4.0 * m * m * S)
        + (D / (2.0 * m * m)) * kin.spread_kernel(t, env.gamma)
        - 1j * hbar * (s0 * s0 - sb * sb) * tau / (2.0 * m * S)
    )
    return b0, b1, b2


def pair_density(
    x,
    t,
    ket: GaussianPacket,
    bra: GaussianPacket,
    env: Environment,
    constants: ModelConstants = ModelConstants(),
):
    """Evolved cross density P_12(x, t); complex in general.

    Degenerates to the one-packet probability density when ket == bra
    and to psi0(x) phi0*(x) at t = 0.
    """
    b0, b1, b2 = pair_coefficients(ket, bra, t, env, constants)
    S = ket.sigma0**2 + bra.sigma0**2
    pref = math.sqrt(2.0 * ket.sigma0 * bra.sigma0 / S)
    return pref / (2.0 * np.sqrt(np.pi * b2)) * np.exp(b0 - (np.asarray(x) - b1) ** 2 / (4.0 * b2))


def pair_current(
    x,
    t,
    ket: GaussianPacket,
    bra: GaussianPacket,
    env: Environment,
    constants: ModelConstants = ModelConstants(),
):
    """Diagonal cross current J_12(x, t) from the evolved off-diagonal kernel."""
    _require_min_uncertainty(ket, bra)
    form = evolved_cross_form(ket, bra, float(t), env, constants)
    return form.diagonal_current(x, constants)


def overlap(ket: GaussianPacket, bra: GaussianPacket, constants: ModelConstants = ModelConstants()):
    """<bra|ket> of the initial packets, exact Gaussian integral.

    Equals the space integral of the evolved cross density at every
    time, which is how the time-independence tests consume it.
    """
    _require_min_uncertainty(ket, bra)
    b0, _, _ = pair_coefficients(ket, bra, 0.0, Environment(0.0, 0.0), constants)
    S = ket.sigma0**2 + bra.sigma0**2
    return math.sqrt(2.0 * ket.sigma0 * bra.sigma0 / S) * np.exp(b0)


def gamma12(
    t,
    ket: GaussianPacket,
    bra: GaussianPacket,
    env: Environment,
    constants: ModelConstants = ModelConstants(),
):
    """Indistinguishability decoherence function for the one-slit pair.

    Only defined for equal widths and coincident centers (sigma_bar =
    sigma0, x_bar = x0); identical for bosons and fermions, zero whenever
    the kick momenta coincide.
    """
    _require_min_uncertainty(ket, bra)
    if ket.sigma0 != bra.sigma0 or ket.x0 != bra.x0:
        raise DomainError("gamma12 closed form needs the one-slit pair (equal widths and centers)")
    hbar, m = constants.hbar, constants.mass
    s2 = ket.sigma0**2
    dp = ket.p0 - bra.p0
    tau = kin.relaxed_time(t, env.gamma)
    sigma_t2 = kin.width_squared(
        t, GaussianPacket(ket.x0, ket.p0, ket.sigma0, 0.0), env, constants
    )
    bracket = 1.0 - (s2 / sigma_t2) * (1.0 + (hbar * tau) ** 2 / (4.0 * m * m * s2 * s2))
    return -(s2 * dp * dp / (2.0 * hbar**2)) * bracket


@dataclass(frozen=True)
class SuperposedState:
    """Finite superposition sum_i weights[i] * packets[i] of eta = 0 Gaussians."""

    packets: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.packets) != len(self.weights) or not self.packets:
            raise DomainError("need equally many packets and weights, at least one")
        _require_min_uncertainty(*self.packets)

    @classmethod
    def single(cls, packet: GaussianPacket):
        return cls((packet,), (1.0,))

    @classmethod
    def symmetric_cat(cls, base: GaussianPacket, constants: ModelConstants = ModelConstants()):
        """Normalized mirror-pair superposition used by the figure presets."""
        from .cat import CatState

        cat = CatState.symmetric(base, constants)
        return cls((cat.packet_a, cat.packet_b), (cat.norm, cat.norm))

    def braket_with(self, other: "SuperposedState", constants: ModelConstants = ModelConstants()):
        """<self|other> via the closed-form Gram matrix."""
        acc = 0.0 + 0.0j
        for ci, gi in zip(self.weights, self.packets):
            for cj, gj in zip(other.weights, other.packets):
                acc += np.conj(ci) * cj * overlap(gj, gi, constants)
        return acc

    def cross_density_integral_with(
        self, other: "SuperposedState", constants: ModelConstants = ModelConstants()
    ):
        """int dx of the evolved cross density of self against other.

        Closed form, time and environment independent: each kernel
        integrates to its initial overlap.
        """
        acc = 0.0 + 0.0j
        for ci, gi in zip(self.weights, self.packets):
            for cj, gj in zip(other.weights, other.packets):
                acc += ci * np.conj(cj) * overlap(gi, gj, constants)
        return acc

    def density(self, x, t, env: Environment, constants: ModelConstants = ModelConstants()):
        """One-particle probability density of the superposition."""
        x = np.asarray(x, dtype=float)
        acc = np.zeros(np.broadcast(x, 0.0).shape, dtype=complex)
        for ci, gi in zip(self.weights, self.packets):
            for cj, gj in zip(self.weights, self.packets):
                acc += ci * np.conj(cj) * pair_density(x, t, gi, gj, env, constants)
        return acc.real if acc.ndim else float(acc.real)

    def current(self, x, t, env: Environment, constants: ModelConstants = ModelConstants()):
        """One-particle probability current of the superposition."""
        x = np.asarray(x, dtype=float)
        acc = np.zeros(np.broadcast(x, 0.0).shape, dtype=complex)
        for ci, gi in zip(self.weights, self.packets):
            for cj, gj in zip(self.weights, self.packets):
                acc += ci * np.conj(cj) * pair_current(x, t, gi, gj, env, constants)
        return acc.real if acc.ndim else float(acc.real)

    def cross_density_with(
        self, other: "SuperposedState", x, t, env: Environment, constants=ModelConstants()
    ):
        """Evolved cross density of self against other (complex)."""
        x = np.asarray(x, dtype=float)
        acc = np.zeros(np.broadcast(x, 0.0).shape, dtype=complex)
        for ci, gi in zip(self.weights, self.packets):
            for cj, gj in zip(other.weights, other.packets):
                acc += ci * np.conj(cj) * pair_density(x, t, gi, gj, env, constants)
        return acc

    def cross_current_with(
        self, other: "SuperposedState", x, t, env: Environment, constants=ModelConstants()
    ):
        x = np.asarray(x, dtype=float)
        acc = np.zeros(np.broadcast(x, 0.0).shape, dtype=complex)
        for ci, gi in zip(self.weights, self.packets):
            for cj, gj in zip(other.weights, other.packets):
                acc += ci * np.conj(cj) * pair_current(x, t, gi, gj, env, constants)
        return acc


_EXCHANGE_SIGN = {"boson": 1.0, "fermion": -1.0}


@dataclass(frozen=True)
class TwoParticleState:
    """(Anti-)symmetrized or distinguishable pair of one-particle states."""

    psi: SuperposedState
    phi: SuperposedState
    statistics: str
    constants: ModelConstants = ModelConstants()

    def __post_init__(self):
        if self.statistics not in ("boson", "fermion", "maxwell-boltzmann"):
            raise DomainError(f"unknown statistics {self.statistics!r}")
        if self.statistics == "fermion":
            s = self.overlap_total()
            if abs(1.0 - abs(s) ** 2) < 1e-12:
                raise DomainError("fermion pair needs distinct states (|<phi|psi>| < 1)")

    def overlap_total(self):
        """s = integral of the evolved cross density of phi against psi.

        Time independent; equals the initial-state overlap by the
        continuity equation.
        """
        return self.phi.cross_density_integral_with(self.psi, self.constants)

    def norm_squared(self):
        """N_+-^2 fixing <Psi|Psi> = 1; 1/2 for distinguishable particles."""
        if self.statistics == "maxwell-boltzmann":
            return 0.5
        sign = _EXCHANGE_SIGN[self.statistics]
        return 1.0 / (2.0 * (1.0 + sign * abs(self.overlap_total()) ** 2))

    def joint_density(self, x1, x2, t, env: Environment):
        """Joint detection probability density P(x1, x2, t)."""
        c = self.constants
        P11_1 = self.psi.density(x1, t, env, c)
        P11_2 = self.psi.density(x2, t, env, c)
        P22_1 = self.phi.density(x1, t, env, c)
        P22_2 = self.phi.density(x2, t, env, c)
        direct = P11_1 * P22_2 + P22_1 * P11_2
        if self.statistics == "maxwell-boltzmann":
            return 0.5 * direct
        sign = _EXCHANGE_SIGN[self.statistics]
        P12_1 = self.psi.cross_density_with(self.phi, x1, t, env, c)
        P21_2 = self.phi.cross_density_with(self.psi, x2, t, env, c)
        exchange = 2.0 * np.real(P12_1 * P21_2)
        return self.norm_squared() * (direct + sign * exchange)

    def single_particle_density(self, x, t, env: Environment):
        """Marginal density of one particle, the other integrated out."""
        c = self.constants
        P11 = self.psi.density(x, t, env, c)
        P22 = self.phi.density(x, t, env, c)
        if self.statistics == "maxwell-boltzmann":
            return 0.5 * (P11 + P22)
        sign = _EXCHANGE_SIGN[self.statistics]
        s = self.overlap_total()
        P12 = self.psi.cross_density_with(self.phi, x, t, env, c)
        return self.norm_squared() * (P11 + P22 + sign * 2.0 * np.real(P12 * s))

    def single_particle_current(self, x, t, env: Environment):
        """Current paired with the single-particle density by continuity."""
        c = self.constants
        J11 = self.psi.current(x, t, env, c)
        J22 = self.phi.current(x, t, env, c)
        if self.statistics == "maxwell-boltzmann":
            return 0.5 * (J11 + J22)
        sign = _EXCHANGE_SIGN[self.statistics]
        s = self.overlap_total()
        J12 = self.psi.cross_current_with(self.phi, x, t, env, c)
        return self.norm_squared() * (J11 + J22 + sign * 2.0 * np.real(J12 * s))

    def single_particle_continuity_residual(self, x, t, env: Environment, h: float = 1e-3):
        """|d_t P_sp + d_x J_sp| via central differences at (x, t)."""
        from .residuals import continuity_residual

        P = lambda xx, tt: self.single_particle_density(xx, tt, env)
        J = lambda xx, tt: self.single_particle_current(xx, tt, env)
        return abs(continuity_residual(P, J, x, t, h))
