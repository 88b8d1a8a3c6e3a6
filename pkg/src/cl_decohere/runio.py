"""Scenario execution and deterministic CSV/manifest emission.

CSV contract: header row with unit annotations in parentheses, comma
separator, LF line endings, floats at 17 significant digits, row order
fixed by grid index.  Identical inputs therefore produce byte-identical
data files; the only run-dependent manifest field is the wall time.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .arrival import (
    ReconstructedCurrentField,
    arrival_distribution,
    bohm_trajectories,
    gaussian_quantile_seeds,
)
from .cat import CatDynamics, CatState
from .errors import ConvergenceError, ScenarioError
from .gaussian import EvolvedGaussian
from .identical import SuperposedState, TwoParticleState
from .model import Environment, GaussianPacket, ModelConstants, Scenario
from .presets import PRESETS, Preset
from .residuals import residual_cl_relative
from .shutter import (
    ShutterConfig,
    classical_pattern,
    shutter_density,
    shutter_density_zero_temperature,
)


def format_float(v) -> str:
    return format(float(v), ".17g")


def param_tag(v) -> str:
    """Compact parameter spelling for file names (0.05 -> '0.05', 1.0 -> '1')."""
    return format(float(v), "g")


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_float(v) for v in row) + "\n")


@dataclass
class RunManifest:
    scenario: str
    version: str
    parameters: dict
    grids: dict
    outputs: list = field(default_factory=list)
    wall_time_s: float = 0.0
    partial: bool = False
    notes: list = field(default_factory=list)

    def write(self, out_dir: Path) -> Path:
        path = out_dir / "manifest.json"
        payload = {
            "scenario": self.scenario,
            "version": self.version,
            "parameters": self.parameters,
            "grids": self.grids,
            "outputs": sorted(self.outputs),
            "wall_time_s": round(self.wall_time_s, 3),
            "partial": self.partial,
            "notes": self.notes,
        }
        with open(path, "w", newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path


def _map_ordered(fn, items, jobs: int):
    """Apply fn over items preserving order; bounded thread pool when jobs > 1."""
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _grid(values):
    lo, hi, n = values
    return np.linspace(lo, hi, int(n))


# -- preset runners ---------------------------------------------------------


def _run_fig1(out: Path, jobs: int, tol: float, manifest: RunManifest):
    p = PRESETS["fig1"].parameters
    packet = GaussianPacket(**p["packet"])
    constants = ModelConstants(g=p["g"])
    detector = p["detector"]

    for gamma in p["distribution_gammas"]:
        for kT in p["temperatures"]:
            source = EvolvedGaussian(packet, Environment(gamma, kT), constants)
            dist = arrival_distribution(detector, source, tol=tol)
            name = f"arrival_dist_g{param_tag(gamma)}_T{param_tag(kT)}.csv"
            write_csv(out / name, ["t(time)", "Pi_a(1/time)"], zip(dist.times, dist.pi_values))
            manifest.outputs.append(name)

    rows = []
    for kT in p["temperatures"]:
        for gamma in p["moment_gammas"]:
            source = EvolvedGaussian(packet, Environment(gamma, kT), constants)
            dist = arrival_distribution(detector, source, tol=tol)
            rows.append((kT, gamma, dist.mean, dist.rms))
    name = "arrival_moments.csv"
    write_csv(out / name, ["kT(energy)", "gamma(1/time)", "tau_a(time)", "sigma_a(time)"], rows)
    manifest.outputs.append(name)


def _run_fig2(out: Path, jobs: int, tol: float, manifest: RunManifest):
    preset = PRESETS["fig2"]
    p = preset.parameters
    base = GaussianPacket(**p["packet"])
    constants = ModelConstants(g=p["g"])
    ts = _grid(preset.grids["t"])
    for gamma, kT in p["curves"]:
        dyn = CatDynamics(CatState.symmetric(base, constants), Environment(gamma, kT), constants)
        G = np.array([dyn.gamma_min(t) for t in ts])
        name = f"decoherence_g{param_tag(gamma)}_T{param_tag(kT)}.csv"
        write_csv(out / name, ["t(time)", "Gamma(1)", "a(1)"], zip(ts, G, np.exp(G)))
        manifest.outputs.append(name)


def _run_fig3(out: Path, jobs: int, tol: float, manifest: RunManifest):
    preset = PRESETS["fig3"]
    p = preset.parameters
    constants = ModelConstants(g=p["g"])
    ts = _grid(preset.grids["t"])
    for kT in p["temperatures"]:
        for eta in p["etas"]:
            base = GaussianPacket(p["packet"]["x0"], p["packet"]["p0"], p["packet"]["sigma0"], eta)
            dyn = CatDynamics(
                CatState.symmetric(base, constants), Environment(p["gamma"], kT), constants
            )
            G = np.array([dyn.gamma(t) for t in ts])
            name = f"attenuation_T{param_tag(kT)}_eta{param_tag(eta)}.csv"
            write_csv(out / name, ["t(time)", "Gamma(1)", "a(1)"], zip(ts, G, np.exp(G)))
            manifest.outputs.append(name)


def _run_fig4(out: Path, jobs: int, tol: float, manifest: RunManifest):
    preset = PRESETS["fig4"]
    p = preset.parameters
    base = GaussianPacket(**p["packet"])
    constants = ModelConstants(g=p["g"])
    xs = _grid(preset.grids["x"])
    ts = _grid(preset.grids["t"])

    def emit(name, env):
        dyn = CatDynamics(CatState.symmetric(base, constants), env, constants)
        rows = []
        for t in ts:
            P = dyn.density(xs, t) if t > 0 else dyn.density(xs, 0.0)
            rows.extend((t, x, v) for x, v in zip(xs, P))
        write_csv(out / name, ["t(time)", "x(length)", "P(1/length)"], rows)
        manifest.outputs.append(name)

    for gamma in p["gammas"]:
        emit(f"cat_density_g{param_tag(gamma)}_T{param_tag(p['kT'])}.csv", Environment(gamma, p["kT"]))
    if p["closed_companion"]:
        emit("cat_density_closed.csv", Environment(0.0, 0.0))


def _cat_trajectory_bundle(base, env, constants, preset: Preset, h: float = 1e-3):
    dyn = CatDynamics(CatState.symmetric(base, constants), env, constants)
    xg = _grid(preset.grids["reconstruction_x"])
    field_ = ReconstructedCurrentField(lambda x, t: dyn.density(x, t), xg)
    n = preset.parameters["seeds_per_branch"]
    seeds_a = gaussian_quantile_seeds(dyn.cat.packet_a, n)
    seeds_b = gaussian_quantile_seeds(dyn.cat.packet_b, n)
    seeds = np.concatenate([seeds_b, seeds_a, [dyn.cat.packet_b.x0, dyn.cat.packet_a.x0]])
    labels = (
        ["left-packet"] * n + ["right-packet"] * n + ["center", "center"]
    )
    ts = _grid(preset.grids["t"])
    return bohm_trajectories(seeds, field_.velocity, ts, labels=labels, h=h)


def _run_fig5(out: Path, jobs: int, tol: float, manifest: RunManifest):
    preset = PRESETS["fig5"]
    p = preset.parameters
    base = GaussianPacket(**p["packet"])
    constants = ModelConstants(g=p["g"])
    for gamma in p["gammas"]:
        bundle = _cat_trajectory_bundle(base, Environment(gamma, p["kT"]), constants, preset, h=2e-3)
        rows = []
        for i in range(bundle.seeds.size):
            for t, x in zip(bundle.times, bundle.positions[i]):
                rows.append((i, _LABEL_CODE[bundle.labels[i]], t, x))
        name = f"trajectories_g{param_tag(gamma)}.csv"
        write_csv(out / name, ["seed(index)", "branch(code)", "t(time)", "x(length)"], rows)
        manifest.outputs.append(name)
    manifest.notes.append("branch codes: 0=left-packet, 1=right-packet, 2=center")


_LABEL_CODE = {"left-packet": 0, "right-packet": 1, "center": 2}


def _identical_states(p, constants):
    psi = SuperposedState.symmetric_cat(GaussianPacket(**p["psi"]), constants)
    phi = SuperposedState.symmetric_cat(GaussianPacket(**p["phi"]), constants)
    return psi, phi


def _run_fig6(out: Path, jobs: int, tol: float, manifest: RunManifest):
    preset = PRESETS["fig6"]
    p = preset.parameters
    constants = ModelConstants()
    psi, phi = _identical_states(p, constants)
    xs = _grid(preset.grids["x"])
    states = {
        stats: TwoParticleState(psi, phi, stats, constants)
        for stats in ("boson", "fermion", "maxwell-boltzmann")
    }
    for case, gamma, kT in p["cases"]:
        env = Environment(gamma, kT)
        rows = []
        for t in p["times"]:
            vals = {
                stats: states[stats].single_particle_density(xs, t, env) for stats in states
            }
            rows.extend(
                (t, x, vb, vf, vm)
                for x, vb, vf, vm in zip(
                    xs, vals["boson"], vals["fermion"], vals["maxwell-boltzmann"]
                )
            )
        name = f"single_particle_{case}.csv"
        write_csv(
            out / name,
            ["t(time)", "x(length)", "P_boson(1/length)", "P_fermion(1/length)", "P_mb(1/length)"],
            rows,
        )
        manifest.outputs.append(name)


def _run_fig7(out: Path, jobs: int, tol: float, manifest: RunManifest):
    preset = PRESETS["fig7"]
    p = preset.parameters
    constants = ModelConstants()
    psi, phi = _identical_states(p, constants)
    x2 = _grid(preset.grids["x2"])
    x1 = p["x1"]
    states = {
        stats: TwoParticleState(psi, phi, stats, constants)
        for stats in ("boson", "fermion", "maxwell-boltzmann")
    }
    for case, gamma, kT in p["cases"]:
        env = Environment(gamma, kT)
        rows = []
        for t in p["times"]:
            vals = {stats: states[stats].joint_density(x1, x2, t, env) for stats in states}
            rows.extend(
                (t, x, vb, vf, vm)
                for x, vb, vf, vm in zip(
                    x2, vals["boson"], vals["fermion"], vals["maxwell-boltzmann"]
                )
            )
        name = f"joint_{case}.csv"
        write_csv(
            out / name,
            [
                "t(time)",
                "x2(length)",
                "P_boson(1/length^2)",
                "P_fermion(1/length^2)",
                "P_mb(1/length^2)",
            ],
            rows,
        )
        manifest.outputs.append(name)


def _run_fig8(out: Path, jobs: int, tol: float, manifest: RunManifest):
    preset = PRESETS["fig8"]
    p = preset.parameters
    constants = ModelConstants()
    k = p["k"]
    xs = _grid(preset.grids["map_x"])
    ts = _grid(preset.grids["map_t"])
    failures = []

    def density_fn(env):
        if env.kT == 0.0:
            return lambda x, t: shutter_density_zero_temperature(x, t, k, constants)
        cfg = ShutterConfig(k=k, env=env, constants=constants, r_min=p["r_min"], tol=tol)

        def f(x, t):
            try:
                return shutter_density(x, t, cfg)
            except ConvergenceError as err:
                failures.append(str(err))
                return err.partial if err.partial is not None else float("nan")

        return f

    for kT in p["map_temperatures"]:
        env = Environment(p["map_gamma"], kT)
        f = density_fn(env)
        points = [(x, t) for t in ts for x in xs]
        values = _map_ordered(lambda pt: f(pt[0], pt[1]), points, jobs)
        rows = [(x, t, v) for (x, t), v in zip(points, values)]
        name = f"shutter_xt_g{param_tag(p['map_gamma'])}_T{param_tag(kT)}.csv"
        write_csv(out / name, ["x(length)", "t(time)", "P(1)"], rows)
        manifest.outputs.append(name)

    ts_profile = _grid(preset.grids["profile_t"])
    xs_profile = _grid(preset.grids["profile_x"])
    for gamma in p["profile_gammas"]:
        env = Environment(gamma, p["profile_kT"])
        f = density_fn(env)
        vals_t = _map_ordered(lambda t: f(p["profile_x"], t), ts_profile, jobs)
        name = f"shutter_time_profile_g{param_tag(gamma)}_T{param_tag(p['profile_kT'])}.csv"
        write_csv(out / name, ["t(time)", "P(1)"], zip(ts_profile, vals_t))
        manifest.outputs.append(name)
        vals_x = _map_ordered(lambda x: f(x, p["profile_t"]), xs_profile, jobs)
        name = f"shutter_space_profile_g{param_tag(gamma)}_T{param_tag(p['profile_kT'])}.csv"
        write_csv(out / name, ["x(length)", "P(1)"], zip(xs_profile, vals_x))
        manifest.outputs.append(name)

    closed_t = [shutter_density_zero_temperature(p["profile_x"], t, k, constants) for t in ts_profile]
    classical_t = classical_pattern(p["profile_x"], ts_profile, k, constants)
    write_csv(
        out / "shutter_time_profile_closed.csv",
        ["t(time)", "P(1)", "P_classical(1)"],
        zip(ts_profile, closed_t, classical_t),
    )
    manifest.outputs.append("shutter_time_profile_closed.csv")
    closed_x = [
        shutter_density_zero_temperature(x, p["profile_t"], k, constants) for x in xs_profile
    ]
    classical_x = classical_pattern(xs_profile, p["profile_t"], k, constants)
    write_csv(
        out / "shutter_space_profile_closed.csv",
        ["x(length)", "P(1)", "P_classical(1)"],
        zip(xs_profile, closed_x, classical_x),
    )
    manifest.outputs.append("shutter_space_profile_closed.csv")

    if failures:
        manifest.partial = True
        manifest.notes.extend(f"non-converged point: {msg}" for msg in failures[:10])


_PRESET_RUNNERS = {
    "fig1": _run_fig1,
    "fig2": _run_fig2,
    "fig3": _run_fig3,
    "fig4": _run_fig4,
    "fig5": _run_fig5,
    "fig6": _run_fig6,
    "fig7": _run_fig7,
    "fig8": _run_fig8,
}


def run_preset(name: str, out_dir, jobs: int = 1, tol: float = 1e-8) -> RunManifest:
    if name not in _PRESET_RUNNERS:
        raise ScenarioError(f"unknown preset {name!r}; available: {sorted(_PRESET_RUNNERS)}")
    preset = PRESETS[name]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(
        scenario=name,
        version=__version__,
        parameters=preset.parameters,
        grids=preset.grids,
    )
    start = time.monotonic()
    _PRESET_RUNNERS[name](out, jobs, tol, manifest)
    manifest.wall_time_s = time.monotonic() - start
    manifest.write(out)
    return manifest


# -- generic scenario runner --------------------------------------------------


def run(scenario: Scenario, out_dir, jobs: int = 1, tol: float = 1e-8) -> RunManifest:
    """Execute one validated scenario, emitting CSV data plus a manifest."""
    scenario.validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(
        scenario=scenario.kind,
        version=__version__,
        parameters=_scenario_parameters(scenario),
        grids=_scenario_grids(scenario),
    )
    start = time.monotonic()
    _SCENARIO_RUNNERS[scenario.kind](scenario, out, jobs, tol, manifest)
    manifest.wall_time_s = time.monotonic() - start
    manifest.write(out)
    return manifest


def _scenario_parameters(s: Scenario) -> dict:
    return {
        "constants": {"hbar": s.constants.hbar, "mass": s.constants.mass, "g": s.constants.g},
        "environment": {"gamma": s.environment.gamma, "kT": s.environment.kT},
        "packets": [
            {"x0": p.x0, "p0": p.p0, "sigma0": p.sigma0, "eta": p.eta} for p in s.packets
        ],
        "detector": s.detector,
        "wavenumber": s.wavenumber,
        "statistics": s.statistics,
    }


def _scenario_grids(s: Scenario) -> dict:
    grids = {}
    if s.space is not None:
        grids["x"] = (s.space.min, s.space.max, s.space.count)
    if s.times is not None:
        grids["t"] = (s.times.min, s.times.max, s.times.count)
    return grids


def _scenario_arrival(s: Scenario, out: Path, jobs, tol, manifest):
    source = EvolvedGaussian(s.packets[0], s.environment, s.constants)
    dist = arrival_distribution(s.detector, source, tol=tol)
    write_csv(out / "arrival_dist.csv", ["t(time)", "Pi_a(1/time)"], zip(dist.times, dist.pi_values))
    write_csv(
        out / "arrival_moments.csv",
        ["tau_a(time)", "sigma_a(time)", "normalization(1)"],
        [(dist.mean, dist.rms, dist.normalization_check)],
    )
    manifest.outputs.extend(["arrival_dist.csv", "arrival_moments.csv"])


def _cat_from_scenario(s: Scenario) -> CatDynamics:
    cat = CatState.symmetric(s.packets[0], s.constants)
    if len(s.packets) == 2:
        cat = CatState(s.packets[0], s.packets[1], cat.norm)
    return CatDynamics(cat, s.environment, s.constants)


def _scenario_cat(s: Scenario, out: Path, jobs, tol, manifest):
    dyn = _cat_from_scenario(s)
    xs = s.space.points()
    rows = []
    for t in s.times.points():
        P = dyn.density(xs, t)
        rows.extend((t, x, v) for x, v in zip(xs, P))
    write_csv(out / "cat_density.csv", ["t(time)", "x(length)", "P(1/length)"], rows)
    manifest.outputs.append("cat_density.csv")


def _scenario_stretch_cat(s: Scenario, out: Path, jobs, tol, manifest):
    dyn = _cat_from_scenario(s)
    ts = s.times.points()
    G = np.array([dyn.gamma(t) for t in ts])
    write_csv(out / "attenuation.csv", ["t(time)", "Gamma(1)", "a(1)"], zip(ts, G, np.exp(G)))
    manifest.outputs.append("attenuation.csv")


def _two_particle_from_scenario(s: Scenario) -> TwoParticleState:
    if len(s.packets) == 2:
        psi = SuperposedState.single(s.packets[0])
        phi = SuperposedState.single(s.packets[1])
    else:
        psi = SuperposedState.symmetric_cat(s.packets[0], s.constants)
        phi = SuperposedState.symmetric_cat(s.packets[2], s.constants)
    return TwoParticleState(psi, phi, s.statistics, s.constants)


def _scenario_identical_single(s: Scenario, out: Path, jobs, tol, manifest):
    state = _two_particle_from_scenario(s)
    xs = s.space.points()
    rows = []
    for t in s.times.points():
        P = state.single_particle_density(xs, t, s.environment)
        rows.extend((t, x, v) for x, v in zip(xs, P))
    write_csv(out / "single_particle.csv", ["t(time)", "x(length)", "P(1/length)"], rows)
    manifest.outputs.append("single_particle.csv")


def _scenario_identical_joint(s: Scenario, out: Path, jobs, tol, manifest):
    state = _two_particle_from_scenario(s)
    x1 = s.detector if s.detector is not None else 0.0
    xs = s.space.points()
    rows = []
    for t in s.times.points():
        P = state.joint_density(x1, xs, t, s.environment)
        rows.extend((t, x, v) for x, v in zip(xs, P))
    write_csv(out / "joint.csv", ["t(time)", "x2(length)", "P(1/length^2)"], rows)
    manifest.outputs.append("joint.csv")
    manifest.notes.append(f"first particle fixed at x1={x1}")


def _scenario_shutter(s: Scenario, out: Path, jobs, tol, manifest):
    cfg = ShutterConfig(k=s.wavenumber, env=s.environment, constants=s.constants, tol=tol)
    cfg.check_time(s.times.max)
    xs = s.space.points()
    ts = s.times.points()
    points = [(x, t) for t in ts for x in xs]
    failures = []

    def f(pt):
        try:
            return shutter_density(pt[0], pt[1], cfg)
        except ConvergenceError as err:
            failures.append(str(err))
            return err.partial if err.partial is not None else float("nan")

    values = _map_ordered(f, points, jobs)
    rows = [(x, t, v) for (x, t), v in zip(points, values)]
    write_csv(out / "shutter_xt.csv", ["x(length)", "t(time)", "P(1)"], rows)
    manifest.outputs.append("shutter_xt.csv")
    if failures:
        manifest.partial = True
        manifest.notes.extend(f"non-converged point: {m}" for m in failures[:10])


def _scenario_trajectories(s: Scenario, out: Path, jobs, tol, manifest):
    ts = s.times.points()
    if len(s.packets) == 1:
        source = EvolvedGaussian(s.packets[0], s.environment, s.constants)
        seeds = gaussian_quantile_seeds(s.packets[0], 21)
        bundle = bohm_trajectories(seeds, lambda x, t: source.bohm_velocity(x, t), ts)
        labels = ["center"] * seeds.size
    else:
        dyn = CatDynamics(
            CatState.symmetric(s.packets[0], s.constants), s.environment, s.constants
        )
        span = 6.0 * abs(s.packets[0].x0) if s.packets[0].x0 != 0 else 30.0
        xg = np.linspace(-span, span, 3072)
        field_ = ReconstructedCurrentField(lambda x, t: dyn.density(x, t), xg)
        n = 19
        seeds = np.concatenate(
            [
                gaussian_quantile_seeds(dyn.cat.packet_b, n),
                gaussian_quantile_seeds(dyn.cat.packet_a, n),
                [dyn.cat.packet_b.x0, dyn.cat.packet_a.x0],
            ]
        )
        labels = ["left-packet"] * n + ["right-packet"] * n + ["center", "center"]
        bundle = bohm_trajectories(seeds, field_.velocity, ts, labels=labels, h=2e-3)
    rows = []
    for i in range(bundle.seeds.size):
        for t, x in zip(bundle.times, bundle.positions[i]):
            rows.append((i, _LABEL_CODE.get(labels[i], 2), t, x))
    write_csv(
        out / "trajectories.csv", ["seed(index)", "branch(code)", "t(time)", "x(length)"], rows
    )
    manifest.outputs.append("trajectories.csv")


def _scenario_residual_check(s: Scenario, out: Path, jobs, tol, manifest):
    rng = np.random.default_rng(20240901)
    source = EvolvedGaussian(s.packets[0], s.environment, s.constants)
    rho = lambda x, xp, t: source.density_matrix(0.5 * (x + xp), x - xp, t)
    rows = []
    for draw in range(50):
        t = rng.uniform(0.2, 3.0)
        w = float(source.width(t))
        xt = float(source.center(t))
        x = xt + rng.uniform(-1.5, 1.5) * w
        r = rng.uniform(-0.5, 0.5)
        rel = residual_cl_relative(rho, (x + 0.5 * r, x - 0.5 * r, t), s.environment, s.constants)
        rows.append((draw, t, x, r, rel))
    write_csv(
        out / "residuals.csv",
        ["draw(index)", "t(time)", "x(length)", "r(length)", "relative_residual(1)"],
        rows,
    )
    manifest.outputs.append("residuals.csv")


_SCENARIO_RUNNERS = {
    "arrival": _scenario_arrival,
    "cat": _scenario_cat,
    "stretch-cat": _scenario_stretch_cat,
    "identical-single": _scenario_identical_single,
    "identical-joint": _scenario_identical_joint,
    "shutter": _scenario_shutter,
    "trajectories": _scenario_trajectories,
    "residual-check": _scenario_residual_check,
}
