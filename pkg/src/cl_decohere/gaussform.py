"""Exact propagation of Gaussian density-matrix ansatz states.

Any product psi(x) phi*(x') of (possibly stretched) Gaussian packets is
the exponential of a complex quadratic form in the center-of-mass /
relative coordinates (R, r).  The master equation with friction gamma,
diffusion D and linear potential m*g*x maps quadratic forms to quadratic
forms, so the evolution closes on six complex coefficients:

    rho(R, r) = exp(c0 + cR R + cr r + cRR R^2 + cRr R r + crr r^2)

The propagation follows the partial-Fourier-transform route: transform
over R, integrate the resulting first-order equation along its
characteristics r(s) = e^{2 gamma (s-t)} (r + hbar k/(2 gamma m)) - ...,
then transform back.  Both transforms are Gaussian integrals evaluated
in closed form, so the only approximation anywhere is double precision.

This module is the source of the cross current kernels (the off-diagonal
r-derivative needed for two-particle continuity) and doubles as an
independent derivation route against which the hand-written closed
forms of the other modules are tested.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kinematics as kin
from .errors import DomainError
from .model import Environment, GaussianPacket, ModelConstants


@dataclass(frozen=True)
class QuadraticForm:
    """Coefficients (c0, cR, cr, cRR, cRr, crr) of a Gaussian in (R, r)."""

    c0: complex
    cR: complex
    cr: complex
    cRR: complex
    cRr: complex
    crr: complex

    def __post_init__(self):
        if not self.cRR.real < 0.0:
            raise DomainError("quadratic form must decay in R (Re cRR < 0)")

    def coefficients(self):
        return np.array([self.c0, self.cR, self.cr, self.cRR, self.cRr, self.crr])

    def evaluate(self, R, r):
        R = np.asarray(R)
        r = np.asarray(r)
        return np.exp(
            self.c0
            + self.cR * R
            + self.cr * r
            + self.cRR * R * R
            + self.cRr * R * r
            + self.crr * r * r
        )

    def diagonal(self, x):
        """rho(x, x) = value at r = 0."""
        x = np.asarray(x)
        return np.exp(self.c0 + self.cR * x + self.cRR * x * x)

    def diagonal_current(self, x, constants: ModelConstants):
        """j(x, 0) = -i (hbar/m) d rho/dr at r = 0."""
        x = np.asarray(x)
        slope = self.cr + self.cRr * x
        return -1j * (constants.hbar / constants.mass) * slope * self.diagonal(x)

    def integral_diagonal(self):
        """int rho(x, x) dx, closed Gaussian form."""
        A = -self.cRR
        return np.sqrt(np.pi / A) * np.exp(self.c0 + self.cR**2 / (4.0 * A))


def _packet_log_amplitude(packet: GaussianPacket, constants: ModelConstants):
    """(log-normalization, quadratic coefficient q) with psi = e^{L - q (x-x0)^2 + i p0 x/hbar}."""
    shape = 1.0 + 1j * packet.eta
    q = 1.0 / (4.0 * packet.sigma0**2 * shape)
    L = -0.25 * np.log(2.0 * np.pi * packet.sigma0**2 * shape**2)
    return L, q


def initial_cross_form(
    ket: GaussianPacket, bra: GaussianPacket, constants: ModelConstants = ModelConstants()
) -> QuadraticForm:
    """Quadratic form of psi_ket(x) psi_bra*(x') in (R, r) coordinates."""
    hbar = constants.hbar
    La, qa = _packet_log_amplitude(ket, constants)
    Lb, qb = _packet_log_amplitude(bra, constants)
    Lb, qb = np.conj(Lb), np.conj(qb)
    xa, pa = ket.x0, ket.p0 / hbar
    xb, pb = bra.x0, bra.p0 / hbar
    return QuadraticForm(
        c0=complex(La + Lb - qa * xa * xa - qb * xb * xb),
        cR=complex(2.0 * qa * xa + 2.0 * qb * xb + 1j * (pa - pb)),
        cr=complex(qa * xa - qb * xb + 0.5j * (pa + pb)),
        cRR=complex(-(qa + qb)),
        cRr=complex(-(qa - qb)),
        crr=complex(-0.25 * (qa + qb)),
    )


def evolve_form(
    form: QuadraticForm,
    t: float,
    env: Environment,
    constants: ModelConstants = ModelConstants(),
) -> QuadraticForm:
    """Propagate a quadratic-form state from time 0 to time t."""
    if t < 0:
        raise DomainError(f"evolution time must be >= 0, got {t}")
    if t == 0.0:
        return form
    hbar, m, g = constants.hbar, constants.mass, constants.g
    gamma = env.gamma
    D = env.diffusion(constants)
    tau = kin.relaxed_time(t, gamma)
    tau2 = kin.relaxed_time_double(t, gamma)
    fall = kin.fall_kernel(t, gamma)
    drift = kin.drift_overlap_kernel(t, gamma)
    memory = kin.memory_kernel(t, gamma)

    # partial Fourier transform over R: rho~(k, r) = int dR e^{-ikR} rho
    A = -form.cRR
    ln = 0.5 * np.log(np.pi / A)
    inv4A = 1.0 / (4.0 * A)
    k0 = form.c0 + ln + form.cR**2 * inv4A
    kk = -inv4A
    kr = -2j * form.cRr * inv4A
    kl = -2j * form.cR * inv4A
    rl = form.cr + 2.0 * form.cR * form.cRr * inv4A
    rr = form.crr + form.cRr**2 * inv4A

    # characteristics: substitute r -> e^{-2 gamma t} r - (hbar/m) tau k,
    # then multiply by the accumulated drift/decoherence kernels
    e = np.exp(-2.0 * gamma * t)
    b = -(hbar / m) * tau
    n0 = k0
    nk = kl + rl * b
    nr = rl * e
    nkk = kk + kr * b + rr * b * b
    nkr = kr * e + 2.0 * rr * e * b
    nrr = rr * e * e
    nr += -1j * (m * g / hbar) * tau
    nk += 1j * g * fall
    nrr += -(D / hbar**2) * tau2
    nkr += (D / hbar**2) * 2.0 * (hbar / m) * drift
    nkk += -(D / hbar**2) * (hbar / m) ** 2 * memory

    # inverse transform: rho(R, r) = (1/2pi) int dk e^{+ikR} rho~(k, r)
    A2 = -nkk
    if not A2.real > 0:
        raise DomainError("evolved form lost normalizability in k")
    inv4A2 = 1.0 / (4.0 * A2)
    ln2 = 0.5 * np.log(np.pi / A2) - np.log(2.0 * np.pi)
    return QuadraticForm(
        c0=complex(n0 + ln2 + nk**2 * inv4A2),
        cR=complex(2j * nk * inv4A2),
        cr=complex(nr + 2.0 * nk * nkr * inv4A2),
        cRR=complex(-inv4A2),
        cRr=complex(2j * nkr * inv4A2),
        crr=complex(nrr + nkr**2 * inv4A2),
    )


def evolved_cross_form(
    ket: GaussianPacket,
    bra: GaussianPacket,
    t: float,
    env: Environment,
    constants: ModelConstants = ModelConstants(),
) -> QuadraticForm:
    return evolve_form(initial_cross_form(ket, bra, constants), t, env, constants)
