"""Adaptive quadrature on finite and semi-infinite intervals.

Finite intervals are handled by QUADPACK's globally-adaptive
Gauss-Kronrod rule via scipy; this module adds the evaluation-count
bookkeeping, a hard budget that raises ConvergenceError carrying the
partial result, and the geometric-doubling truncation scheme used for
time integrals on [0, inf).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0:
            raise DomainError("error_estimate must be >= 0")


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_subdivisions: int = 400,
    points=None,
) -> QuadratureResult:
    """Integrate f on [a, b] to within max(tol, tol*|value|).

    ``points`` marks known awkward locations (peaks, stationary phase)
    handed to the subdivision strategy.  Exhausting the subdivision
    budget raises ConvergenceError with the partial result attached.
    """
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    counter = [0]

    def wrapped(x):
        counter[0] += 1
        return f(x)

    pts = None
    if points is not None:
        pts = sorted(p for p in points if min(a, b) < p < max(a, b))
        if not pts:
            pts = None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, abserr = quad(
            wrapped, a, b, epsabs=tol, epsrel=tol, limit=max_subdivisions, points=pts
        )
    result = QuadratureResult(value, abserr, counter[0])
    troubled = [w for w in caught if issubclass(w.category, IntegrationWarning)]
    if troubled and abserr > max(tol, tol * abs(value)) * 10.0:
        raise ConvergenceError(
            f"quadrature did not converge on [{a}, {b}]: {troubled[0].message}",
            partial=result,
        )
    return result


def integrate_semi_infinite_time(
    f: Callable[[float], float],
    tol: float = 1e-8,
    t_initial: float = 1.0,
    max_doublings: int = 40,
    max_subdivisions: int = 400,
) -> QuadratureResult:
    """Integrate an eventually-decaying f >= 0 on [0, inf).

    The cutoff grows geometrically, stopping once the last doubling
    contributes less than tol times the running total.  If no decay is
    detected within the doubling budget a ConvergenceError is raised
    with the partial result.
    """
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    head = integrate_adaptive(f, 0.0, t_initial, tol=tol, max_subdivisions=max_subdivisions)
    total = head.value
    err = head.error_estimate
    evals = head.evaluations
    t_lo = t_initial
    for _ in range(max_doublings):
        t_hi = 2.0 * t_lo
        piece = integrate_adaptive(f, t_lo, t_hi, tol=tol, max_subdivisions=max_subdivisions)
        total += piece.value
        err += piece.error_estimate
        evals += piece.evaluations
        if abs(piece.value) < tol * max(abs(total), 1e-300):
            return QuadratureResult(total, err, evals)
        t_lo = t_hi
    raise ConvergenceError(
        f"no decay detected by t = {t_lo} after {max_doublings} doublings",
        partial=QuadratureResult(total, err, evals),
    )
