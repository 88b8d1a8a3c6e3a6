"""Built-in invariant battery behind ``cl-decohere selftest``.

Each check is a fast, self-contained verification pairing a closed-form
quantity with an independent route to the same number: finite-difference
residuals of the master and continuity equations, Gaussian-engine
cross-derivations, normalization integrals and limit identities.  The
battery is the runtime distillation of the full pytest suite.
"""

from __future__ import annotations

import math

import numpy as np

from .arrival import ReconstructedCurrentField, arrival_distribution
from .cat import CatDynamics, CatState, decoherence_time, gamma_zero_dissipation
from .gaussform import evolved_cross_form
from .gaussian import EvolvedGaussian
from .identical import SuperposedState, TwoParticleState, overlap, pair_density
from .model import Environment, GaussianPacket, ModelConstants
from .quadrature import integrate_adaptive
from .residuals import continuity_residual, residual_cl_relative
from .shutter import ShutterConfig, shutter_density, shutter_density_zero_temperature
from .special import erf_complex, fresnel


def _check_master_equation_residual():
    c = ModelConstants(g=1.0)
    env = Environment(0.3, 8.0)
    ev = EvolvedGaussian(GaussianPacket(1.0, -1.5, 0.8, 1.2), env, c)
    rho = lambda x, xp, t: ev.density_matrix(0.5 * (x + xp), x - xp, t)
    worst = max(
        residual_cl_relative(rho, pt, env, c)
        for pt in [(0.4, 0.1, 1.0), (-0.8, -1.1, 0.7), (1.9, 1.2, 2.2)]
    )
    return worst < 1e-5, f"max relative residual {worst:.2e}"


def _check_continuity():
    c = ModelConstants()
    env = Environment(0.05, 5.0)
    ev = EvolvedGaussian(GaussianPacket(-5.0, 0.5, 1.0, 0.0), env, c)
    worst = max(
        abs(continuity_residual(ev.probability_density, ev.probability_current, x, t))
        for x, t in [(-4.0, 1.0), (-2.0, 4.0), (0.5, 8.0)]
    )
    return worst < 1e-7, f"max residual {worst:.2e}"


def _check_engine_agreement():
    c = ModelConstants()
    env = Environment(0.2, 10.0)
    pk = GaussianPacket(2.0, -1.0, 1.3, 0.7)
    ev = EvolvedGaussian(pk, env, c)
    form = evolved_cross_form(pk, pk, 1.7, env, c)
    diff = abs(form.evaluate(0.4, 0.3) - ev.density_matrix(0.4, 0.3, 1.7))
    return diff < 1e-12, f"|engine - closed form| = {diff:.2e}"


def _check_normalization():
    c = ModelConstants()
    env = Environment(0.01, 2.0)
    dyn = CatDynamics(CatState.symmetric(GaussianPacket(5.0, -2.0, 1.0, 1.0), c), env, c)
    worst = 0.0
    for t in (0.0, 2.0, 6.0):
        total = integrate_adaptive(lambda x: dyn.density(x, t), -60.0, 60.0, tol=1e-10).value
        worst = max(worst, abs(total - 1.0))
    return worst < 1e-8, f"max |int P - 1| = {worst:.2e}"


def _check_cat_cross_term():
    c = ModelConstants()
    env = Environment(0.05, 5.0)
    base = GaussianPacket(5.0, -2.0, 1.0, 0.0)
    dyn = CatDynamics(CatState.symmetric(base, c), env, c)
    mirror = GaussianPacket(-5.0, 2.0, 1.0, 0.0)
    xs = np.linspace(-8.0, 8.0, 33)
    worst = 0.0
    for t in (0.5, 2.0, 5.0):
        direct = dyn.cross_term(xs, t)
        kernel = 2.0 * np.real(pair_density(xs, t, base, mirror, env, c))
        worst = max(worst, float(np.max(np.abs(direct - kernel))))
    return worst < 1e-9, f"max cross-term mismatch {worst:.2e}"


def _check_two_particle():
    c = ModelConstants()
    env = Environment(0.4, 15.0)
    psi = SuperposedState.symmetric_cat(GaussianPacket(5.0, 0.0, 1.0), c)
    phi = SuperposedState.symmetric_cat(GaussianPacket(5.0, 0.0, 0.5), c)
    state = TwoParticleState(psi, phi, "fermion", c)
    res = max(
        state.single_particle_continuity_residual(x, 1.0, env) for x in (-4.0, 0.3, 4.0)
    )
    s0 = state.overlap_total()
    quad = integrate_adaptive(
        lambda x: np.real(phi.cross_density_with(psi, x, 2.0, env, c)), -40.0, 40.0, tol=1e-11
    ).value
    drift = abs(quad - np.real(s0))
    ok = res < 1e-6 and drift < 1e-8
    return ok, f"continuity {res:.2e}, overlap drift {drift:.2e}"


def _check_shutter_branches():
    c = ModelConstants()
    cfg = ShutterConfig(k=1.0, env=Environment(1e-4, 5e-5), constants=c)  # D = 1e-8
    worst = 0.0
    for x, t in [(10.0, 50.0), (5.0, 20.0)]:
        open_sys = shutter_density(x, t, cfg)
        closed = shutter_density_zero_temperature(x, t, 1.0, c)
        worst = max(worst, abs(open_sys - closed))
    return worst < 1e-3, f"max |P(D=1e-8) - P(D=0)| = {worst:.2e}"


def _check_special_functions():
    ok = True
    msgs = []
    v = erf_complex(1.0)
    ok &= abs(v - 0.8427007929497149) < 1e-12
    msgs.append(f"erf(1) err {abs(v - 0.8427007929497149):.1e}")
    v = erf_complex(1j)
    ok &= abs(v - 1.6504257587975429j) < 1e-12
    C, S = fresnel(1.0)
    ok &= abs(C - 0.7798934003768228) < 1e-12 and abs(S - 0.4382591473903548) < 1e-12
    msgs.append(f"fresnel(1) err {abs(C - 0.7798934003768228):.1e}")
    Cinf, Sinf = fresnel(50.0)
    ok &= abs(Cinf - 0.5) < 0.01 and abs(Sinf - 0.5) < 0.01
    return bool(ok), "; ".join(msgs)


def _check_arrival_normalization():
    c = ModelConstants()
    source = EvolvedGaussian(GaussianPacket(-5.0, 0.5, 1.0, 0.0), Environment(0.05, 5.0), c)
    dist = arrival_distribution(0.0, source, tol=1e-8)
    return abs(dist.normalization_check - 1.0) < 1e-6, (
        f"normalization {dist.normalization_check:.9f}"
    )


def _check_reconstructed_current():
    c = ModelConstants()
    env = Environment(0.02, 3.0)
    ev = EvolvedGaussian(GaussianPacket(0.0, 1.0, 1.0, 0.0), env, c)
    xg = np.linspace(-20.0, 25.0, 4096)
    field = ReconstructedCurrentField(lambda x, t: ev.probability_density(x, t), xg)
    t = 2.0
    J_grid = field.current_grid(t)
    J_exact = ev.probability_current(xg, t)
    worst = float(np.max(np.abs(J_grid - J_exact)) / np.max(np.abs(J_exact)))
    return worst < 1e-6, f"max node current mismatch {worst:.2e} of peak"


def _check_limits():
    c = ModelConstants()
    tD = decoherence_time(Environment(0.005, 5.0), d=10.0, constants=c)
    ok = abs(tD - 0.6) < 1e-12
    cat = CatState.symmetric(GaussianPacket(5.0, 0.0, 0.05, 0.0), c)
    g_approx = gamma_zero_dissipation(0.06, cat, Environment(0.005, 5.0), c)
    ok &= abs(g_approx - (-0.06 / tD)) / (0.06 / tD) < 0.05
    return bool(ok), f"tau_D = {tD}, deep-limit ratio err {abs(g_approx + 0.06 / tD) * tD / 0.06:.2e}"


CHECKS = [
    ("master-equation residual", _check_master_equation_residual),
    ("single-packet continuity", _check_continuity),
    ("gaussian-engine agreement", _check_engine_agreement),
    ("cat-state normalization", _check_normalization),
    ("cat cross term vs pair kernel", _check_cat_cross_term),
    ("two-particle continuity and overlap", _check_two_particle),
    ("shutter branch consistency", _check_shutter_branches),
    ("special-function values", _check_special_functions),
    ("arrival-time normalization", _check_arrival_normalization),
    ("reconstructed current field", _check_reconstructed_current),
    ("decoherence-time limits", _check_limits),
]


def run_selftest(verbose: bool = True) -> bool:
    all_ok = True
    for name, check in CHECKS:
        try:
            ok, detail = check()
        except Exception as err:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(err).__name__}: {err}"
        all_ok &= ok
        if verbose:
            print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
