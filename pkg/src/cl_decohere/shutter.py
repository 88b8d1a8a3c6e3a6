"""Diffraction in time: sudden release of a confined plane-wave beam.

Negligible-dissipation regime: friction enters only through the
diffusion coefficient D.  The beam density is a single space integral
of an erf-difference kernel; the kernel is assembled from the Faddeeva
function in a scaled form that never overflows, because the raw complex
error function grows like exp(Im z)^2 while the printed Gaussian
envelope cancels exactly that growth:

    e^{-y^2} Re erf(xz + i y) = e^{-y^2} - e^{-xz^2} Re[e^{-2 i xz y} w(-y + i xz)]

with |w| <= 1 throughout (Im(-y + i xz) = xz >= 0 because the cutoff
side keeps R' <= 0).  At zero temperature the density collapses to the
classic Fresnel-integral form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .model import Environment, ModelConstants
from .quadrature import integrate_adaptive
from .special import faddeeva, fresnel

_MAX_DISSIPATION_PRODUCT = 0.05


@dataclass(frozen=True)
class ShutterConfig:
    """Beam wavenumber, environment and quadrature controls."""

    k: float
    env: Environment
    constants: ModelConstants = ModelConstants()
    r_min: float = -200.0
    tol: float = 1e-9
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError(f"wavenumber must be positive, got {self.k}")
        if not self.r_min < 0:
            raise DomainError(f"lower cutoff must be negative, got {self.r_min}")
        if self.constants.g != 0.0:
            raise DomainError("the shutter problem is free (g = 0)")

    def check_time(self, t_max: float) -> None:
        if self.env.gamma * t_max > _MAX_DISSIPATION_PRODUCT:
            warnings.warn(
                f"gamma*t = {self.env.gamma * t_max:.3g} leaves the negligible-dissipation "
                "regime the propagator assumes",
                stacklevel=2,
            )


def shutter_propagator(x, y, t, xp, yp, D, constants: ModelConstants = ModelConstants()):
    """Density-matrix propagator G(x, y, t | x', y', 0) at negligible friction.

    Pure free-particle phase for D = 0; the D-term exponent is a negative
    semi-definite quadratic form (a^2 + a b + b^2 >= 0).
    """
    if not t > 0:
        raise DomainError(f"propagator needs t > 0, got {t}")
    hbar, m = constants.hbar, constants.mass
    phase = (1j * m / (2.0 * hbar * t)) * ((x - xp) ** 2 - (y - yp) ** 2)
    a = x - y
    b = xp - yp
    damp = -(D * t / (3.0 * hbar**2)) * (a * a + a * b + b * b)
    return (m / (2.0 * math.pi * hbar * t)) * np.exp(phase + damp)


def shutter_integrand(x, t, r_source, k, D, constants: ModelConstants = ModelConstants()):
    """Kernel f(x, t, R') of the beam-density integral; real by construction.

    r_source (the paper's R') is the center-of-mass coordinate of the
    confined region, <= 0.  For D = 0 the kernel degenerates to a sine
    over its phase velocity, evaluated by series at the removable
    singularity.
    """
    if not t > 0:
        raise DomainError(f"integrand needs t > 0, got {t}")
    if D < 0:
        raise DomainError(f"diffusion coefficient must be >= 0, got {D}")
    hbar, m = constants.hbar, constants.mass
    if D == 0.0:
        u = hbar * k * t + m * (r_source - x)
        w = 2.0 * r_source * u / (hbar * t)
        if abs(u) < 1e-12 * max(abs(hbar * k * t), abs(m * (r_source - x)), 1.0):
            return -4.0 * r_source * (1.0 - w * w / 6.0 + w**4 / 120.0)
        return -(2.0 * hbar * t / u) * math.sin(w)
    scale = 2.0 * hbar * math.sqrt(3.0 * D * t**3)
    xz = -4.0 * D * r_source * t * t / scale
    yz = 3.0 * hbar * (hbar * k * t + m * (r_source - x)) / scale
    w = faddeeva(-yz + 1j * xz)
    value = math.exp(-yz * yz) - math.exp(-xz * xz) * (np.exp(-2j * xz * yz) * w).real
    return hbar * math.sqrt(3.0 * math.pi / (D * t)) * value


def _panel_points(x, t, k, D, r_min, constants):
    """Breakpoints: stationary point of the kernel plus e-folding radii."""
    hbar, m = constants.hbar, constants.mass
    r_peak = x - hbar * k * t / m
    ell_y = 2.0 * math.sqrt(D * t**3) / (math.sqrt(3.0) * m)
    ell_x = 0.5 * hbar * math.sqrt(3.0 / (D * t))
    pts = [r_peak]
    for n in (1.0, 3.0, 6.0, 10.0):
        pts.extend((r_peak - n * ell_y, r_peak + n * ell_y, -n * ell_x))
    return [p for p in pts if r_min < p < 0.0]


def shutter_density(x, t, cfg: ShutterConfig):
    """Beam density P(x, t); unnormalized, tends to 1 deep behind the front."""
    if not t > 0:
        raise DomainError(f"density needs t > 0, got {t}")
    hbar, m = cfg.constants.hbar, cfg.constants.mass
    D = cfg.env.diffusion(cfg.constants)
    if D == 0.0:
        return shutter_density_zero_temperature(x, t, cfg.k, cfg.constants)
    points = _panel_points(x, t, cfg.k, D, cfg.r_min, cfg.constants)
    prefactor = m / (2.0 * math.pi * hbar * t)
    try:
        result = integrate_adaptive(
            lambda rp: shutter_integrand(x, t, rp, cfg.k, D, cfg.constants),
            cfg.r_min,
            0.0,
            tol=cfg.tol,
            max_subdivisions=cfg.max_subdivisions,
            points=points,
        )
    except ConvergenceError as err:
        raise ConvergenceError(
            f"shutter density quadrature at (x={x}, t={t}) did not converge",
            partial=prefactor * err.partial.value if err.partial is not None else None,
        ) from err
    return prefactor * result.value


def shutter_density_zero_temperature(x, t, k, constants: ModelConstants = ModelConstants()):
    """Closed Fresnel form of the beam density for the isolated system."""
    if not t > 0:
        raise DomainError(f"density needs t > 0, got {t}")
    hbar, m = constants.hbar, constants.mass
    xi = math.sqrt(m / (math.pi * hbar * t)) * (hbar * k * t / m - x)
    C, S = fresnel(xi)
    return 0.5 * (C + 0.5) ** 2 + 0.5 * (S + 0.5) ** 2


def classical_pattern(x, t, k, constants: ModelConstants = ModelConstants()):
    """Step profile obtained when the Fresnel oscillations are replaced by
    their asymptotes: 1 behind the classical front, 0 ahead, 1/4 on it."""
    hbar, m = constants.hbar, constants.mass
    front = hbar * k * t / m
    x = np.asarray(x, dtype=float)
    out = np.where(x < front, 1.0, np.where(x > front, 0.0, 0.25))
    return float(out) if out.ndim == 0 else out
