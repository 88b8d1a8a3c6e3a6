"""Named parameter sets reproducing each published figure scenario.

Each preset bundles the exact packet/environment parameters from the
corresponding figure caption with documented grid choices (the captions
give no axis ranges for the density and trajectory plots; the ranges
used here are recorded in every run manifest).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Environment, GaussianPacket, SpaceGrid, TimeGrid

# packet behind figures 2-5: colliding mirror pair
CAT_BASE = GaussianPacket(x0=5.0, p0=-2.0, sigma0=1.0, eta=0.0)
# packet behind figure 1: single packet launched toward the origin
ARRIVAL_PACKET = GaussianPacket(x0=-5.0, p0=0.5, sigma0=1.0, eta=0.0)
# one-particle states behind figures 6-7: motionless cats of different widths
IDENTICAL_WIDE = GaussianPacket(x0=5.0, p0=0.0, sigma0=1.0, eta=0.0)
IDENTICAL_NARROW = GaussianPacket(x0=5.0, p0=0.0, sigma0=0.5, eta=0.0)


@dataclass(frozen=True)
class Preset:
    name: str
    summary: str
    parameters: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)


PRESETS = {
    "fig1": Preset(
        name="fig1",
        summary="Arrival-time distributions and their moments at X=0",
        parameters={
            "packet": {"x0": -5.0, "p0": 0.5, "sigma0": 1.0, "eta": 0.0},
            "detector": 0.0,
            "g": 0.0,
            "distribution_gammas": (0.05, 0.2),
            "moment_gammas": (0.05, 0.1, 0.15, 0.2),
            "temperatures": (1.0, 5.0, 10.0),
        },
        grids={},
    ),
    "fig2": Preset(
        name="fig2",
        summary="Decoherence function of the minimum-uncertainty cat",
        parameters={
            "packet": {"x0": 5.0, "p0": -2.0, "sigma0": 1.0, "eta": 0.0},
            "g": 0.0,
            "curves": (
                (0.005, 1.0),
                (0.01, 1.0),
                (0.015, 1.0),
                (0.05, 1.0),
                (0.05, 2.0),
                (0.05, 5.0),
                (0.05, 8.0),
            ),
        },
        grids={"t": (0.0, 1000.0, 2001)},
    ),
    "fig3": Preset(
        name="fig3",
        summary="Attenuation coefficient of the stretched cat",
        parameters={
            "packet": {"x0": 5.0, "p0": -2.0, "sigma0": 1.0},
            "g": 0.0,
            "gamma": 0.005,
            "temperatures": (1.0, 5.0),
            "etas": (0.0, 1.0, 2.0, 3.0),
        },
        grids={"t": (0.0, 50.0, 501)},
    ),
    "fig4": Preset(
        name="fig4",
        summary="Cat-state density maps for increasing relaxation rate",
        parameters={
            "packet": {"x0": 5.0, "p0": -2.0, "sigma0": 1.0, "eta": 0.0},
            "g": 0.0,
            "kT": 1.0,
            "gammas": (0.0001, 0.001, 0.003, 0.01),
            "closed_companion": True,
        },
        grids={"x": (-15.0, 15.0, 301), "t": (0.0, 10.0, 101)},
    ),
    "fig5": Preset(
        name="fig5",
        summary="Bohmian trajectory bundles for the cat state",
        parameters={
            "packet": {"x0": 5.0, "p0": -2.0, "sigma0": 1.0, "eta": 0.0},
            "g": 0.0,
            "kT": 1.0,
            "gammas": (0.001, 0.05),
            "seeds_per_branch": 19,
        },
        grids={"t": (0.0, 10.0, 201), "reconstruction_x": (-30.0, 30.0, 3072)},
    ),
    "fig6": Preset(
        name="fig6",
        summary="Single-particle density of two identical particles",
        parameters={
            "psi": {"x0": 5.0, "p0": 0.0, "sigma0": 1.0},
            "phi": {"x0": 5.0, "p0": 0.0, "sigma0": 0.5},
            "cases": (("closed", 0.0, 0.0), ("g0.2_T10", 0.2, 10.0), ("g0.4_T10", 0.4, 10.0)),
            "times": (0.1, 0.5, 2.0),
        },
        grids={"x": (-15.0, 15.0, 601)},
    ),
    "fig7": Preset(
        name="fig7",
        summary="Joint detection with one particle at the origin",
        parameters={
            "psi": {"x0": 5.0, "p0": 0.0, "sigma0": 1.0},
            "phi": {"x0": 5.0, "p0": 0.0, "sigma0": 0.5},
            "cases": (("closed", 0.0, 0.0), ("g0.4_T15", 0.4, 15.0), ("g0.4_T25", 0.4, 25.0)),
            "times": (0.5, 1.0, 1.5),
            "x1": 0.0,
        },
        grids={"x2": (-15.0, 15.0, 601)},
    ),
    "fig8": Preset(
        name="fig8",
        summary="Shutter beam density: maps over (x, t) and fixed-x/fixed-t profiles",
        parameters={
            "k": 1.0,
            "map_gamma": 0.0001,
            "map_temperatures": (0.0, 1.0, 2.0, 4.0),
            "profile_gammas": (5e-05, 0.0001, 0.00015),
            "profile_kT": 2.0,
            "profile_x": 10.0,
            "profile_t": 50.0,
            "r_min": -200.0,
        },
        grids={
            "map_x": (0.0, 20.0, 81),
            "map_t": (10.0, 50.0, 41),
            "profile_t": (10.0, 100.0, 361),
            "profile_x": (0.0, 20.0, 201),
        },
    ),
}


def list_presets():
    return [(p.name, p.summary, p.parameters) for p in PRESETS.values()]


def cat_environment(gamma: float, kT: float) -> Environment:
    return Environment(gamma=gamma, kT=kT)


def space_grid(preset: Preset, key: str) -> SpaceGrid:
    lo, hi, n = preset.grids[key]
    return SpaceGrid(lo, hi, n)


def time_grid(preset: Preset, key: str = "t") -> TimeGrid:
    lo, hi, n = preset.grids[key]
    return TimeGrid(lo, hi, n)
