"""Finite-difference self-verification of the master equation.

These stencils are the package's built-in referee: they check that any
density-matrix field claimed to solve the dynamics actually does, and
that density/current pairs satisfy the continuity equation.  All
stencils are second-order central differences; the default step 1e-3
balances truncation against cancellation at double precision.
"""

from __future__ import annotations

import numpy as np

from .model import Environment, ModelConstants

DEFAULT_STEP = 1e-3


def residual_cl(
    rho,
    point,
    env: Environment,
    constants: ModelConstants = ModelConstants(),
    h: float = DEFAULT_STEP,
):
    """Master-equation residual of rho(x, x', t) at one interior point.

    Evaluates d rho/dt minus the sum of the kinetic commutator, friction,
    linear-potential and decoherence terms.  Returns the complex residual;
    on the analytic solutions it vanishes at O(h^2).
    """
    x, xp, t = point
    hbar, m, g = constants.hbar, constants.mass, constants.g
    gamma = env.gamma
    D = env.diffusion(constants)

    v = rho(x, xp, t)
    dt = (rho(x, xp, t + h) - rho(x, xp, t - h)) / (2.0 * h)
    dxx = (rho(x + h, xp, t) - 2.0 * v + rho(x - h, xp, t)) / h**2
    dxpxp = (rho(x, xp + h, t) - 2.0 * v + rho(x, xp - h, t)) / h**2
    dx = (rho(x + h, xp, t) - rho(x - h, xp, t)) / (2.0 * h)
    dxp = (rho(x, xp + h, t) - rho(x, xp - h, t)) / (2.0 * h)

    rhs = (
        -hbar / (2.0 * m * 1j) * (dxx - dxpxp)
        - gamma * (x - xp) * (dx - dxp)
        + (m * g * x - m * g * xp) / (1j * hbar) * v
        - (D / hbar**2) * (x - xp) ** 2 * v
    )
    return dt - rhs


def residual_cl_relative(rho, point, env, constants=ModelConstants(), h=DEFAULT_STEP):
    """|residual| / |d rho/dt| at the point (scale-free form used in tests)."""
    x, xp, t = point
    dt = (rho(x, xp, t + h) - rho(x, xp, t - h)) / (2.0 * h)
    res = residual_cl(rho, point, env, constants, h)
    return abs(res) / max(abs(dt), 1e-300)


def continuity_residual(P, J, x: float, t: float, h: float = DEFAULT_STEP):
    """Residual of dP/dt + dJ/dx at (x, t), central differences."""
    dPdt = (P(x, t + h) - P(x, t - h)) / (2.0 * h)
    dJdx = (J(x + h, t) - J(x - h, t)) / (2.0 * h)
    return dPdt + dJdx


def continuity_residual_relative(P, J, x: float, t: float, h: float = DEFAULT_STEP):
    """|dP/dt + dJ/dx| over the larger of the two term magnitudes."""
    dPdt = (P(x, t + h) - P(x, t - h)) / (2.0 * h)
    dJdx = (J(x + h, t) - J(x - h, t)) / (2.0 * h)
    scale = max(abs(dPdt), abs(dJdx), 1e-300)
    return abs(dPdt + dJdx) / scale
