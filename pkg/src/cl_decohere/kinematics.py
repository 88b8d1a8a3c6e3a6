"""Damped-motion kernels and packet kinematics.

Everything here reduces to combinations of exponentials in u = 2*gamma*t
whose closed forms suffer catastrophic cancellation as u -> 0 (the
negligible-dissipation regime every shutter scenario lives in).  Each
kernel therefore switches to its exact power series below a fixed
crossover; the series coefficients come from the exponential series, so
both branches agree to machine precision at the crossover.
"""

from __future__ import annotations

import math

import numpy as np

from .model import Environment, GaussianPacket, ModelConstants

# Below this value of u = 2*gamma*t the direct formulas lose digits to
# cancellation; the series are fully converged there with _NTERMS terms.
_SERIES_CROSSOVER = 0.5
_NTERMS = 26


def _poly_eval(coeffs, u):
    acc = np.zeros_like(u)
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


def _series_coeffs(term):
    return [term(n) for n in range(_NTERMS)]

# relax_time_kernel: (1 - e^-u)/u            -> tau(t) = t * kernel(2 gamma t)
# fall_kernel:       (u - 1 + e^-u)/u^2      -> x_t gravity term = g t^2 * kernel
# spread_kernel:     (2u + 4e^-u - 3 - e^-2u)/u^3   -> thermal width growth
# drift_overlap_kernel: (phi1(u) - phi1(2u))/u       -> cross term int e^-u tau
# memory_kernel:     (1 - 2 phi1(u) + phi1(2u))/u^2  -> int tau^2
_FALL = _series_coeffs(lambda n: (-1.0) ** n / math.factorial(n + 2))
_SPREAD = _series_coeffs(
    lambda n: (4.0 * (-1.0) ** (n + 3) - (-2.0) ** (n + 3)) / math.factorial(n + 3)
)
_DRIFT = _series_coeffs(
    lambda n: (-1.0) ** (n + 1) * (1.0 - 2.0 ** (n + 1)) / math.factorial(n + 2)
)
_MEMORY = _series_coeffs(
    lambda n: (-1.0) ** (n + 2) * (2.0 ** (n + 2) - 2.0) / math.factorial(n + 3)
)


def _stable(u, series, direct):
    """Evaluate a kernel of u >= 0, switching branch at the crossover."""
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    out = np.empty_like(u)
    small = u < _SERIES_CROSSOVER
    if small.any():
        out[small] = _poly_eval(series, u[small])
    if (~small).any():
        out[~small] = direct(u[~small])
    return float(out[0]) if scalar else out


def relaxed_time(t, gamma):
    """tau(t) = (1 - e^{-2 gamma t})/(2 gamma); the 'relaxed' elapsed time.

    Monotone in t; equals t for gamma = 0 and saturates at 1/(2 gamma).
    """
    if gamma == 0.0:
        return np.asarray(t, dtype=float) + 0.0 if np.ndim(t) else float(t)
    t = np.asarray(t, dtype=float)
    val = -np.expm1(-2.0 * gamma * t) / (2.0 * gamma)
    return float(val) if val.ndim == 0 else val


def relaxed_time_double(t, gamma):
    """(1 - e^{-4 gamma t})/(4 gamma); decay of the r^2 coefficient."""
    if gamma == 0.0:
        return np.asarray(t, dtype=float) + 0.0 if np.ndim(t) else float(t)
    t = np.asarray(t, dtype=float)
    val = -np.expm1(-4.0 * gamma * t) / (4.0 * gamma)
    return float(val) if val.ndim == 0 else val


def fall_kernel(t, gamma):
    """(2 gamma t - 1 + e^{-2 gamma t})/(4 gamma^2); dimension time^2.

    Gravity displacement is g * fall_kernel; limits to t^2/2 as gamma -> 0.
    """
    t = np.asarray(t, dtype=float)
    if gamma == 0.0:
        val = 0.5 * t * t
        return float(val) if val.ndim == 0 else val
    u = 2.0 * gamma * t
    val = t * t * _stable(u, _FALL, lambda v: (v - 1.0 + np.exp(-v)) / (v * v))
    return float(val) if np.ndim(val) == 0 else val


def spread_kernel(t, gamma):
    """(4 gamma t + 4 e^{-2 gamma t} - 3 - e^{-4 gamma t})/(8 gamma^3).

    Thermal contribution to the squared width is (D/m^2) * spread_kernel;
    limits to (2/3) t^3 as gamma -> 0.
    """
    t = np.asarray(t, dtype=float)
    if gamma == 0.0:
        val = 2.0 * t**3 / 3.0
        return float(val) if val.ndim == 0 else val
    u = 2.0 * gamma * t
    val = t**3 * _stable(
        u, _SPREAD, lambda v: (2.0 * v + 4.0 * np.exp(-v) - 3.0 - np.exp(-2.0 * v)) / v**3
    )
    return float(val) if np.ndim(val) == 0 else val


def drift_overlap_kernel(t, gamma):
    """int_0^t e^{-2 gamma s} tau(s) ds; limits to t^2/2 as gamma -> 0."""
    t = np.asarray(t, dtype=float)
    if gamma == 0.0:
        val = 0.5 * t * t
        return float(val) if val.ndim == 0 else val
    u = 2.0 * gamma * t

    def direct(v):
        phi1 = lambda w: -np.expm1(-w) / w
        return (phi1(v) - phi1(2.0 * v)) / v

    val = t * t * _stable(u, _DRIFT, direct)
    return float(val) if np.ndim(val) == 0 else val


def memory_kernel(t, gamma):
    """int_0^t tau(s)^2 ds; limits to t^3/3 as gamma -> 0."""
    t = np.asarray(t, dtype=float)
    if gamma == 0.0:
        val = t**3 / 3.0
        return float(val) if val.ndim == 0 else val
    u = 2.0 * gamma * t

    def direct(v):
        phi1 = lambda w: -np.expm1(-w) / w
        return (1.0 - 2.0 * phi1(v) + phi1(2.0 * v)) / (v * v)

    val = t**3 * _stable(u, _MEMORY, direct)
    return float(val) if np.ndim(val) == 0 else val


def classical_center(t, packet: GaussianPacket, env: Environment, constants: ModelConstants):
    """Center x_t of the evolved packet: damped drift plus gravitational fall."""
    tau = relaxed_time(t, env.gamma)
    return packet.x0 + (packet.p0 / constants.mass) * tau - constants.g * fall_kernel(t, env.gamma)


def width_squared(t, packet: GaussianPacket, env: Environment, constants: ModelConstants):
    """Squared width w_t^2 of the evolved packet.

    Four contributions: the stretched initial variance, quantum spreading
    through tau^2, the eta-linear cross term, and thermal diffusion.
    The first three form a quadratic in tau with negative discriminant,
    so w_t^2 > 0 for every valid packet.
    """
    hbar, m = constants.hbar, constants.mass
    s2 = packet.sigma0**2
    tau = relaxed_time(t, env.gamma)
    D = env.diffusion(constants)
    w2 = (
        s2 * (1.0 + packet.eta**2)
        + (hbar * tau) ** 2 / (4.0 * m * m * s2)
        + packet.eta * hbar * tau / m
        + (D / (m * m)) * spread_kernel(t, env.gamma)
    )
    return w2


def width(t, packet: GaussianPacket, env: Environment, constants: ModelConstants):
    w2 = width_squared(t, packet, env, constants)
    if np.any(np.asarray(w2) <= 0.0):
        from .errors import ConsistencyError

        raise ConsistencyError(f"nonpositive squared width {w2} at t={t}")
    return np.sqrt(w2)


def center_velocity(t, packet: GaussianPacket, env: Environment, constants: ModelConstants):
    """d(x_t)/dt = (p0/m) e^{-2 gamma t} - g tau(t)."""
    tau = relaxed_time(t, env.gamma)
    return (packet.p0 / constants.mass) * np.exp(-2.0 * env.gamma * np.asarray(t, dtype=float)) - constants.g * tau


def width_squared_rate(t, packet: GaussianPacket, env: Environment, constants: ModelConstants):
    """d(w_t^2)/dt, assembled from the exact kernel derivatives."""
    hbar, m = constants.hbar, constants.mass
    tau = relaxed_time(t, env.gamma)
    e2 = np.exp(-2.0 * env.gamma * np.asarray(t, dtype=float))
    D = env.diffusion(constants)
    return (
        (hbar**2 / (2.0 * m * m * packet.sigma0**2)) * tau * e2
        + packet.eta * hbar * e2 / m
        + 2.0 * (D / (m * m)) * tau * tau
    )
