"""Command-line interface.

    cl-decohere <preset>      run a named figure preset (fig1 .. fig8)
    cl-decohere run           run a custom scenario from a config file
    cl-decohere list-presets  enumerate presets with their parameters
    cl-decohere selftest      run the built-in invariant battery

Exit codes: 0 success, 2 invalid scenario/arguments, 3 numerical
non-convergence (partial outputs are flagged in the manifest).
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConvergenceError, DomainError, ScenarioError
from .model import Environment, GaussianPacket, ModelConstants, Scenario, SpaceGrid, TimeGrid
from .presets import PRESETS, list_presets
from .runio import run, run_preset


def parse_config_file(path: str) -> dict:
    """Flat key=value assignments, one per line, '#' starts a comment."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ScenarioError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values


def _floats(cfg, key, default=None):
    if key not in cfg:
        if default is None:
            raise ScenarioError(f"config is missing required key {key!r}")
        return default
    return float(cfg[key])


def scenario_from_config(cfg: dict, overrides: dict | None = None) -> Scenario:
    """Build a Scenario from flat config values; overrides win over the file."""
    merged = dict(cfg)
    if overrides:
        merged.update({k: str(v) for k, v in overrides.items() if v is not None})
    kind = merged.get("kind")
    if kind is None:
        raise ScenarioError("config needs kind=<scenario kind>")
    constants = ModelConstants(
        hbar=_floats(merged, "hbar", 1.0),
        mass=_floats(merged, "mass", 1.0),
        g=_floats(merged, "g", 0.0),
    )
    env = Environment(gamma=_floats(merged, "gamma", 0.0), kT=_floats(merged, "kT", 0.0))
    packets = []
    for i in ("", "2", "3", "4"):
        if f"x0{i}" in merged or (i == "" and kind != "shutter"):
            packets.append(
                GaussianPacket(
                    x0=_floats(merged, f"x0{i}", 0.0),
                    p0=_floats(merged, f"p0{i}", 0.0),
                    sigma0=_floats(merged, f"sigma0{i}", 1.0),
                    eta=_floats(merged, f"eta{i}", 0.0),
                )
            )
    space = None
    if "x_min" in merged:
        space = SpaceGrid(_floats(merged, "x_min"), _floats(merged, "x_max"), int(_floats(merged, "x_count")))
    times = None
    if "t_min" in merged:
        times = TimeGrid(_floats(merged, "t_min"), _floats(merged, "t_max"), int(_floats(merged, "t_count")))
    detector = float(merged["detector"]) if "detector" in merged else None
    wavenumber = float(merged["k"]) if "k" in merged else None
    return Scenario(
        kind=kind,
        constants=constants,
        environment=env,
        packets=tuple(packets),
        space=space,
        times=times,
        detector=detector,
        wavenumber=wavenumber,
        statistics=merged.get("statistics"),
    )


def _default_jobs(args_jobs) -> int:
    if args_jobs is not None:
        return max(1, args_jobs)
    env_jobs = os.environ.get("CL_DECOHERE_JOBS")
    if env_jobs:
        try:
            return max(1, int(env_jobs))
        except ValueError:
            raise ScenarioError(f"CL_DECOHERE_JOBS must be an integer, got {env_jobs!r}")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cl-decohere",
        description="Decoherence scenarios for a damped particle: figure presets, "
        "custom runs and self-verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--out", default="out", help="output directory (default: ./out)")
    common.add_argument("--jobs", type=int, default=None, help="worker threads (or CL_DECOHERE_JOBS)")
    common.add_argument("--tol", type=float, default=1e-8, help="quadrature tolerance")

    for name in PRESETS:
        sub.add_parser(name, parents=[common], help=PRESETS[name].summary)
    sub.add_parser("run", parents=[common], help="run a scenario described by --config")
    sub.add_parser("list-presets", help="list presets and their caption parameters")
    sub.add_parser("selftest", help="run the invariant battery; exit 0 on pass")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "list-presets":
        for name, summary, params in list_presets():
            print(f"{name}: {summary}")
            for key, value in params.items():
                print(f"    {key} = {value}")
        return 0

    if args.command == "selftest":
        from .selftest import run_selftest

        return 0 if run_selftest() else 1

    try:
        jobs = _default_jobs(args.jobs)
        if args.command == "run":
            if not args.config:
                raise ScenarioError("`run` needs --config FILE")
            scenario = scenario_from_config(parse_config_file(args.config))
            manifest = run(scenario, args.out, jobs=jobs, tol=args.tol)
        else:
            manifest = run_preset(args.command, args.out, jobs=jobs, tol=args.tol)
    except (ScenarioError, DomainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ConvergenceError as err:
        print(f"error: numerical non-convergence: {err}", file=sys.stderr)
        return 3

    print(f"wrote {len(manifest.outputs)} data file(s) to {args.out} (manifest.json alongside)")
    if manifest.partial:
        print("warning: some points did not converge; manifest flags them", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
