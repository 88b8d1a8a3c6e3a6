"""Arrival-time distributions at a fixed detector and Bohmian trajectory
bundles.

The arrival distribution is the modulus of the probability current at
the detector, normalized over all positive times.  Trajectories follow
the guidance field J/P; for a single packet the field is affine in x
and known in closed form, while for superpositions the current is
reconstructed from the continuity equation as minus the cumulative
space integral of the time derivative of the density (exact up to the
finite-difference step in t), which sidesteps any need for a closed
cross-current formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfinv

from .errors import DomainError, ScenarioError
from .ode import rk4_step_many
from .quadrature import integrate_adaptive, integrate_semi_infinite_time

_TAIL_FRACTION = 1e-8


@dataclass(frozen=True)
class ArrivalDistribution:
    """Tabulated Pi_a(X, t) with quadrature-grade moments."""

    detector: float
    times: np.ndarray
    pi_values: np.ndarray
    mean: float
    rms: float
    normalization_check: float


def _current_magnitude(source, detector):
    def f(t):
        return abs(float(source.probability_current(detector, t)))

    return f


def _truncation_time(f, t_start=1.0, max_doublings=40):
    """Grow T geometrically until |J| has fallen below the peak tail fraction."""
    t = t_start
    peak = 0.0
    for _ in range(max_doublings):
        samples = f(t) + f(0.75 * t)
        peak = max(peak, samples)
        if peak > 0.0 and f(t) < _TAIL_FRACTION * peak:
            return t
        t *= 2.0
    raise ScenarioError("current never decays at the detector; no arrival distribution")


def arrival_distribution(
    detector: float,
    source,
    tol: float = 1e-8,
    grid_count: int = 1200,
) -> ArrivalDistribution:
    """Arrival-time distribution Pi_a(X, t) = |J(X, t)| / int |J(X, t')| dt'.

    ``source`` must expose probability_current(x, t).  Raises
    ScenarioError when the current never reaches the detector.
    """
    f = _current_magnitude(source, detector)
    total = integrate_semi_infinite_time(f, tol=tol)
    if total.value <= 0.0 or not math.isfinite(total.value):
        raise ScenarioError(f"vanishing current at detector X={detector}")

    t_cut = _truncation_time(f)
    times = np.linspace(0.0, t_cut, grid_count)
    pi = np.array([f(t) for t in times]) / total.value

    mean = integrate_semi_infinite_time(lambda t: t * f(t), tol=tol).value / total.value
    second = integrate_semi_infinite_time(lambda t: t * t * f(t), tol=tol).value / total.value
    var = max(second - mean * mean, 0.0)
    norm_check = integrate_adaptive(f, 0.0, t_cut, tol=tol).value / total.value
    return ArrivalDistribution(
        detector=detector,
        times=times,
        pi_values=pi,
        mean=mean,
        rms=math.sqrt(var),
        normalization_check=norm_check,
    )


def mean_and_rms(dist: ArrivalDistribution, norm_tol: float = 1e-3):
    """First moment and rms width of a tabulated distribution.

    The tabulation must integrate to one within norm_tol (its tail is
    cut at the truncation time); otherwise the input is rejected.
    """
    norm = np.trapezoid(dist.pi_values, dist.times)
    if abs(norm - 1.0) > norm_tol:
        raise DomainError(f"distribution not normalized on its grid: integral = {norm}")
    mean = np.trapezoid(dist.times * dist.pi_values, dist.times)
    second = np.trapezoid(dist.times**2 * dist.pi_values, dist.times)
    return mean, math.sqrt(max(second - mean * mean, 0.0))


# -- trajectory machinery ---------------------------------------------------


@dataclass(frozen=True)
class TrajectoryBundle:
    seeds: np.ndarray
    labels: tuple
    times: np.ndarray
    positions: np.ndarray  # shape (n_seeds, n_times)
    termination_times: np.ndarray  # nan where the trajectory ran to the end

    def terminal_positions(self) -> np.ndarray:
        return self.positions[:, -1]


def gaussian_quantile_seeds(packet, count: int, spread_factor: float = 2.0):
    """Equispaced-quantile seeds of the packet's initial position marginal.

    Quantiles are clipped to +-spread_factor standard deviations so the
    bundle stays inside the region the guidance field resolves well.
    """
    width = packet.position_uncertainty()
    q = (np.arange(count) + 0.5) / count
    offsets = math.sqrt(2.0) * erfinv(2.0 * q - 1.0)
    offsets = np.clip(offsets, -spread_factor, spread_factor)
    return packet.x0 + width * offsets


def bohm_trajectories(
    seeds,
    velocity,
    times,
    labels=None,
    h: float = 1e-3,
    h_floor: float = 1e-6,
) -> TrajectoryBundle:
    """Integrate dx/dt = velocity(x_array, t) for a bundle of seeds.

    RK4 with fixed substep h between the requested output times (last
    substep shortened).  Trajectories whose velocity turns non-finite
    are frozen in place and their termination time recorded.
    """
    if h <= 0:
        raise DomainError("step must be positive")
    h = max(h, h_floor)
    seeds = np.asarray(seeds, dtype=float)
    times = np.asarray(times, dtype=float)
    n = seeds.size
    positions = np.empty((n, times.size))
    positions[:, 0] = seeds
    termination = np.full(n, np.nan)
    active = np.ones(n, dtype=bool)

    def masked_velocity(x, t):
        v = np.asarray(velocity(x, t), dtype=float)
        return np.where(np.isfinite(v), v, 0.0)

    x = seeds.copy()
    for k in range(1, times.size):
        t0, t1 = times[k - 1], times[k]
        t = t0
        while t < t1 - 1e-15:
            step = min(h, t1 - t)
            v_probe = np.asarray(velocity(x, t), dtype=float)
            dying = active & ~np.isfinite(v_probe)
            if dying.any():
                termination[dying] = t
                active &= ~dying
            x_new = rk4_step_many(masked_velocity, x, t, step)
            x = np.where(active, x_new, x)
            t += step
        positions[:, k] = x
    if labels is None:
        labels = tuple("trajectory" for _ in range(n))
    return TrajectoryBundle(
        seeds=seeds,
        labels=tuple(labels),
        times=times,
        positions=positions,
        termination_times=termination,
    )


class ReconstructedCurrentField:
    """Velocity field J/P for sources with a density but no closed current.

    On a fixed grid, J(x, t) = -int_{edge}^x d_t P dx' by the continuity
    equation, with d_t P taken by central differences; off-grid values
    are linear interpolations.  The grid edge must sit where the density
    has decayed below the stated floor.
    """

    def __init__(self, density, x_grid, dt: float = 1e-4, edge_floor: float = 1e-14):
        self.density = density
        self.x = np.asarray(x_grid, dtype=float)
        self.dt = dt
        self.edge_floor = edge_floor

    def _check_edges(self, t):
        P = self.density(self.x[[0, -1]], t)
        if np.any(P > self.edge_floor):
            raise DomainError(
                f"grid edges carry density {P} > {self.edge_floor}; widen the grid"
            )

    def current_grid(self, t):
        from scipy.integrate import cumulative_simpson

        tm = max(t - self.dt, 0.0)
        dPdt = (self.density(self.x, t + self.dt) - self.density(self.x, tm)) / (
            t + self.dt - tm
        )
        return -cumulative_simpson(dPdt, x=self.x, initial=0.0)

    def velocity(self, x, t):
        J = self.current_grid(t)
        P = np.maximum(self.density(self.x, t), 1e-280)
        xq = np.asarray(x, dtype=float)
        Jq = np.interp(xq, self.x, J)
        Pq = np.interp(xq, self.x, P)
        return Jq / Pq
