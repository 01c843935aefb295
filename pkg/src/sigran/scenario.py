"""Scenario files: the radio/mobility world description.

Scenarios are JSON documents (schema documented in the README). A scenario
declares the cells, the pathloss model, explicitly placed UEs and/or a
mover template that is expanded per run seed, policy defaults, and timing.
Unknown keys are rejected so typos fail loudly. Two scenarios ship with the
package:

* ``paper-fig7``: three cells at the published geometry (400 m between
  cells 1 and 2, cell 3 500 m from cell 1), cells 1 and 2 heavily loaded,
  and a single 2 Mbps vehicular UE driving from cell 1 toward cell 2 at
  20 m/s.
* ``paper-fig7-loaded``: same cells, with a seeded template of 12 vehicular
  UEs fanning out from cell 1 into the region between cells 2 and 3 with
  staggered departures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .costs import ParameterError
from .radio import (
    DEFAULT_EFFICIENCY_CAP,
    DEFAULT_NOISE_FIGURE_DB,
    DEFAULT_REFERENCE_EFFICIENCY,
    CellConfig,
    PathlossParams,
)


class ScenarioError(ValueError):
    """Raised for unreadable, malformed, or out-of-range scenario input."""


@dataclass(frozen=True)
class UeConfig:
    """One explicitly placed UE."""

    id: int
    start: tuple[float, float]
    velocity: tuple[float, float] = (0.0, 0.0)
    demand_bps: float = 2e6
    depart_s: float = 0.0

    def __post_init__(self):
        if self.demand_bps < 0:
            raise ParameterError(f"ues[{self.id}].demand_bps must be >= 0")
        if self.depart_s < 0:
            raise ParameterError(f"ues[{self.id}].depart_s must be >= 0")


@dataclass(frozen=True)
class MoverTemplate:
    """Seed-expanded population of moving UEs.

    Each mover starts near ``start_center`` (square jitter of half-width
    ``start_jitter_m``), drives at ``speed_mps`` toward a uniformly drawn
    point on the segment ``target_a``..``target_b``, and parks on arrival
    when ``stop_at_target``. Departures follow ``depart_mode``:

    * ``"uniform"``: independent draws from [0, depart_window_s];
    * ``"staggered"``: a vehicle stream with seed-random phase, mover i
      departing at ``phase + i * depart_spacing_s`` where the phase is one
      draw from [0, depart_window_s].
    """

    count: int
    speed_mps: float = 20.0
    demand_bps: float = 2e6
    start_center: tuple[float, float] = (30.0, 0.0)
    start_jitter_m: float = 15.0
    target_a: tuple[float, float] = (400.0, 80.0)
    target_b: tuple[float, float] = (260.0, 240.0)
    depart_window_s: float = 0.0
    depart_mode: str = "uniform"
    depart_spacing_s: float = 3.0
    stop_at_target: bool = True

    def __post_init__(self):
        if self.count < 0:
            raise ParameterError("movers.count must be >= 0")
        if self.speed_mps <= 0:
            raise ParameterError("movers.speed_mps must be > 0")
        if self.demand_bps < 0:
            raise ParameterError("movers.demand_bps must be >= 0")
        if self.start_jitter_m < 0:
            raise ParameterError("movers.start_jitter_m must be >= 0")
        if self.depart_window_s < 0:
            raise ParameterError("movers.depart_window_s must be >= 0")
        if self.depart_mode not in ("uniform", "staggered"):
            raise ParameterError("movers.depart_mode must be 'uniform' or 'staggered'")
        if self.depart_spacing_s < 0:
            raise ParameterError("movers.depart_spacing_s must be >= 0")


@dataclass(frozen=True)
class PolicySettings:
    """Per-scenario handover policy defaults."""

    hysteresis_db: float = 3.0
    time_to_trigger_ms: float = 256.0
    similarity_window_db: float = 3.0

    def __post_init__(self):
        if self.hysteresis_db < 0:
            raise ParameterError("policy.hysteresis_db must be >= 0")
        if self.time_to_trigger_ms < 0:
            raise ParameterError("policy.time_to_trigger_ms must be >= 0")
        if self.similarity_window_db < 0:
            raise ParameterError("policy.similarity_window_db must be >= 0")


@dataclass(frozen=True)
class Scenario:
    name: str
    cells: tuple[CellConfig, ...]
    pathloss: PathlossParams = PathlossParams(shadowing_sigma_db=0.0)
    ues: tuple[UeConfig, ...] = ()
    movers: MoverTemplate | None = None
    policy: PolicySettings = PolicySettings()
    duration_s: float = 20.0
    tick_ms: float = 100.0
    noise_figure_db: float = DEFAULT_NOISE_FIGURE_DB
    reference_efficiency_bps_hz: float = DEFAULT_REFERENCE_EFFICIENCY
    efficiency_cap_bps_hz: float = DEFAULT_EFFICIENCY_CAP
    background_ring_m: float = 100.0

    def __post_init__(self):
        if not self.cells:
            raise ParameterError("scenario needs at least one cell")
        ids = [c.id for c in self.cells]
        if len(set(ids)) != len(ids):
            raise ParameterError("cell ids must be unique")
        ue_ids = [u.id for u in self.ues]
        if len(set(ue_ids)) != len(ue_ids):
            raise ParameterError("ue ids must be unique")
        if self.duration_s <= 0:
            raise ParameterError("duration_s must be > 0")
        if self.tick_ms <= 0:
            raise ParameterError("tick_ms must be > 0")
        if self.background_ring_m <= 0:
            raise ParameterError("background_ring_m must be > 0")


def _pair(value, where: str) -> tuple[float, float]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) for v in value)
    ):
        raise ScenarioError(f"{where} must be a [x, y] pair of numbers")
    return float(value[0]), float(value[1])


def _take(d: dict, where: str, allowed: dict):
    """Pop known keys with defaults; reject anything unknown."""
    unknown = set(d) - set(allowed)
    if unknown:
        raise ScenarioError(f"unknown key in {where}: {sorted(unknown)[0]!r}")
    return {k: d.get(k, v) for k, v in allowed.items()}


def scenario_from_dict(data: dict, name: str = "scenario") -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario document must be a JSON object")
    try:
        return _scenario_from_dict(data, name)
    except ParameterError as exc:
        raise ScenarioError(str(exc)) from exc


def _scenario_from_dict(data: dict, name: str) -> Scenario:
    top = _take(
        data,
        "scenario",
        {
            "name": name,
            "duration_s": 20.0,
            "tick_ms": 100.0,
            "noise_figure_db": DEFAULT_NOISE_FIGURE_DB,
            "reference_efficiency_bps_hz": DEFAULT_REFERENCE_EFFICIENCY,
            "efficiency_cap_bps_hz": DEFAULT_EFFICIENCY_CAP,
            "background_ring_m": 100.0,
            "pathloss": {},
            "cells": None,
            "ues": [],
            "movers": None,
            "policy": {},
        },
    )
    if not top["cells"]:
        raise ScenarioError("scenario must define a non-empty 'cells' list")

    # pathloss.seed only matters for standalone use of the parameters;
    # simulation runs re-key shadowing with their own run seed.
    pl_kwargs = _take(
        top["pathloss"],
        "pathloss",
        {
            "exponent": 3.5,
            "reference_loss_db": 38.57,
            "reference_distance_m": 1.0,
            "shadowing_sigma_db": 0.0,
            "seed": 0,
        },
    )
    cells = []
    for i, cd in enumerate(top["cells"]):
        ck = _take(
            cd,
            f"cells[{i}]",
            {
                "id": i + 1,
                "position": None,
                "tx_power_dbm": 46.0,
                "bandwidth_hz": 5e6,
                "background_ues": 0,
                "background_demand_bps": 1e6,
            },
        )
        if ck["position"] is None:
            raise ScenarioError(f"cells[{i}] is missing 'position'")
        ck["position"] = _pair(ck["position"], f"cells[{i}].position")
        cells.append(CellConfig(**ck))

    ues = []
    for i, ud in enumerate(top["ues"]):
        uk = _take(
            ud,
            f"ues[{i}]",
            {
                "id": i,
                "start": None,
                "velocity": [0.0, 0.0],
                "demand_bps": 2e6,
                "depart_s": 0.0,
            },
        )
        if uk["start"] is None:
            raise ScenarioError(f"ues[{i}] is missing 'start'")
        uk["start"] = _pair(uk["start"], f"ues[{i}].start")
        uk["velocity"] = _pair(uk["velocity"], f"ues[{i}].velocity")
        ues.append(UeConfig(**uk))

    movers = None
    if top["movers"] is not None:
        mk = _take(
            top["movers"],
            "movers",
            {
                "count": None,
                "speed_mps": 20.0,
                "demand_bps": 2e6,
                "start_center": [30.0, 0.0],
                "start_jitter_m": 15.0,
                "target_a": [400.0, 80.0],
                "target_b": [260.0, 240.0],
                "depart_window_s": 0.0,
                "depart_mode": "uniform",
                "depart_spacing_s": 3.0,
                "stop_at_target": True,
            },
        )
        if mk["count"] is None:
            raise ScenarioError("movers is missing 'count'")
        for key in ("start_center", "target_a", "target_b"):
            mk[key] = _pair(mk[key], f"movers.{key}")
        movers = MoverTemplate(**mk)

    policy = PolicySettings(
        **_take(
            top["policy"],
            "policy",
            {
                "hysteresis_db": 3.0,
                "time_to_trigger_ms": 256.0,
                "similarity_window_db": 3.0,
            },
        )
    )

    return Scenario(
        name=str(top["name"]),
        cells=tuple(cells),
        pathloss=PathlossParams(**pl_kwargs),
        ues=tuple(ues),
        movers=movers,
        policy=policy,
        duration_s=float(top["duration_s"]),
        tick_ms=float(top["tick_ms"]),
        noise_figure_db=float(top["noise_figure_db"]),
        reference_efficiency_bps_hz=float(top["reference_efficiency_bps_hz"]),
        efficiency_cap_bps_hz=float(top["efficiency_cap_bps_hz"]),
        background_ring_m=float(top["background_ring_m"]),
    )


def parse_scenario(path) -> Scenario:
    """Load and fully validate a scenario file."""
    path = Path(path)
    if not path.is_file():
        raise ScenarioError(f"no such scenario file: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path} is not valid JSON: {exc}") from exc
    return scenario_from_dict(data, name=path.stem)


BUILTIN_SCENARIOS = {
    "paper-fig7": "paper_fig7.json",
    "paper-fig7-loaded": "paper_fig7_loaded.json",
}


def builtin_scenario(name: str) -> Scenario:
    try:
        fname = BUILTIN_SCENARIOS[name]
    except KeyError:
        raise ScenarioError(
            f"unknown builtin scenario {name!r}; available: {sorted(BUILTIN_SCENARIOS)}"
        ) from None
    text = resources.files("sigran.data").joinpath(fname).read_text()
    return scenario_from_dict(json.loads(text), name=name)


def load_scenario(path_or_name: str) -> Scenario:
    """Resolve a CLI scenario argument: builtin name first, then file path."""
    if path_or_name in BUILTIN_SCENARIOS:
        return builtin_scenario(path_or_name)
    return parse_scenario(path_or_name)
