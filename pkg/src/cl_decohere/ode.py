"""Classical fourth-order Runge-Kutta stepping for guidance equations."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import TrajectoryTerminated


def rk4_step(v: Callable[[float, float], float], x: float, t: float, h: float) -> float:
    """One RK4 step of dx/dt = v(x, t); global error O(h^4) on smooth fields.

    A non-finite velocity (vanishing density under the guidance law)
    terminates the trajectory.
    """
    k1 = v(x, t)
    k2 = v(x + 0.5 * h * k1, t + 0.5 * h)
    k3 = v(x + 0.5 * h * k2, t + 0.5 * h)
    k4 = v(x + h * k3, t + h)
    step = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not math.isfinite(step):
        raise TrajectoryTerminated(f"velocity not finite near x={x}", time=t)
    return x + step


def rk4_step_many(v, x: np.ndarray, t: float, h: float) -> np.ndarray:
    """Vectorized RK4 step for a bundle of trajectories sharing one field."""
    k1 = v(x, t)
    k2 = v(x + 0.5 * h * k1, t + 0.5 * h)
    k3 = v(x + 0.5 * h * k2, t + 0.5 * h)
    k4 = v(x + h * k3, t + h)
    step = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    bad = ~np.isfinite(step)
    if bad.any():
        raise TrajectoryTerminated(
            f"velocity not finite for {int(bad.sum())} trajectories", time=t
        )
    return x + step


def integrate_fixed(v, x0: float, t0: float, t1: float, h: float) -> float:
    """Integrate dx/dt = v from t0 to t1 with fixed step h (last step shortened)."""
    x, t = float(x0), float(t0)
    while t < t1 - 1e-15:
        step = min(h, t1 - t)
        x = rk4_step(v, x, t, step)
        t += step
    return x
