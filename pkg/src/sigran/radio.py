"""Radio propagation, link budget, and cell load primitives.

Pathloss follows the log-distance model with optional lognormal shadowing
(a zero-mean normal in dB). Shadowing draws are counter-based: the sample
for (seed, tick) keys a Philox stream and the (ue, cell) pair indexes the
drawn field, so any sample can be regenerated independently of call order.

Defaults (all overridable through scenario files): pathloss exponent 3.5
with 38.57 dB reference loss at 1 m (free space at 2 GHz), shadowing sigma
8 dB, thermal noise -174 dBm/Hz plus a 9 dB noise figure, load accounting
against a 2 bps/Hz reference efficiency, and Shannon rates capped at
6 bps/Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .costs import ParameterError

DEFAULT_PATHLOSS_EXPONENT = 3.5
DEFAULT_REFERENCE_LOSS_DB = 38.57
DEFAULT_REFERENCE_DISTANCE_M = 1.0
DEFAULT_SHADOWING_SIGMA_DB = 8.0
THERMAL_NOISE_DBM_PER_HZ = -174.0
DEFAULT_NOISE_FIGURE_DB = 9.0
DEFAULT_REFERENCE_EFFICIENCY = 2.0  # bps/Hz, for load accounting
DEFAULT_EFFICIENCY_CAP = 6.0  # bps/Hz, modulation ceiling

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class CellConfig:
    """One base station: geometry, power, bandwidth, and static load."""

    id: int
    position: tuple[float, float]
    tx_power_dbm: float = 46.0
    bandwidth_hz: float = 5e6
    background_ues: int = 0
    background_demand_bps: float = 1e6

    def __post_init__(self):
        if not math.isfinite(self.tx_power_dbm):
            raise ParameterError(f"cell {self.id}: tx_power_dbm must be finite")
        if self.bandwidth_hz <= 0:
            raise ParameterError(f"cell {self.id}: bandwidth_hz must be positive")
        if self.background_ues < 0:
            raise ParameterError(f"cell {self.id}: background_ues must be >= 0")
        if self.background_demand_bps < 0:
            raise ParameterError(f"cell {self.id}: background_demand_bps must be >= 0")


@dataclass(frozen=True)
class PathlossParams:
    exponent: float = DEFAULT_PATHLOSS_EXPONENT
    reference_loss_db: float = DEFAULT_REFERENCE_LOSS_DB
    reference_distance_m: float = DEFAULT_REFERENCE_DISTANCE_M
    shadowing_sigma_db: float = DEFAULT_SHADOWING_SIGMA_DB
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.exponent) and self.exponent > 0):
            raise ParameterError("pathloss exponent must be > 0")
        if not (math.isfinite(self.reference_distance_m) and self.reference_distance_m > 0):
            raise ParameterError("reference_distance_m must be > 0")
        if not (math.isfinite(self.reference_loss_db)):
            raise ParameterError("reference_loss_db must be finite")
        if not (math.isfinite(self.shadowing_sigma_db) and self.shadowing_sigma_db >= 0):
            raise ParameterError("shadowing_sigma_db must be >= 0")


def pathloss_db(params: PathlossParams, distance_m: float, shadowing_db: float = 0.0) -> float:
    """Log-distance pathloss in dB; distances inside the reference radius
    are clamped to it."""
    if not math.isfinite(distance_m):
        raise ParameterError(f"distance must be finite, got {distance_m!r}")
    d = max(distance_m, params.reference_distance_m)
    return (
        params.reference_loss_db
        + 10.0 * params.exponent * math.log10(d / params.reference_distance_m)
        + shadowing_db
    )


def shadowing_field(params: PathlossParams, n_ues: int, n_cells: int, tick: int) -> np.ndarray:
    """Shadowing samples for every (ue, cell) pair at one tick, in dB.

    Deterministic in (seed, tick, ue, cell): the (seed, tick) pair selects a
    Philox counter block and the matrix position selects the sample.
    """
    if params.shadowing_sigma_db == 0.0:
        return np.zeros((n_ues, n_cells))
    bits = np.random.Philox(key=params.seed & _SEED_MASK, counter=[0, 0, 0, tick])
    rng = np.random.Generator(bits)
    return rng.normal(0.0, params.shadowing_sigma_db, size=(n_ues, n_cells))


def shadowing_db(params: PathlossParams, ue: int, cell: int, tick: int, n_ues: int, n_cells: int) -> float:
    """Single shadowing sample; equals ``shadowing_field(...)[ue, cell]``."""
    return float(shadowing_field(params, n_ues, n_cells, tick)[ue, cell])


def distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def rsrp_dbm(
    cell: CellConfig,
    ue_position: tuple[float, float],
    params: PathlossParams,
    shadowing_db: float = 0.0,
) -> float:
    """Received power from one cell at a UE position."""
    return cell.tx_power_dbm - pathloss_db(params, distance(cell.position, ue_position), shadowing_db)


def thermal_noise_dbm(bandwidth_hz: float, noise_figure_db: float = DEFAULT_NOISE_FIGURE_DB) -> float:
    """Thermal noise power over a bandwidth, including the receiver noise
    figure."""
    if bandwidth_hz <= 0:
        raise ParameterError("bandwidth_hz must be positive")
    return THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


def _dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def sinr_db_from_rsrp(rsrp_by_cell: dict[int, float], serving_cell: int, noise_dbm: float) -> float:
    """SINR of the serving link, summing interference in the linear domain."""
    if serving_cell not in rsrp_by_cell:
        raise ParameterError(f"serving cell {serving_cell} has no measurement")
    signal = _dbm_to_mw(rsrp_by_cell[serving_cell])
    interference = sum(
        _dbm_to_mw(v) for c, v in rsrp_by_cell.items() if c != serving_cell
    )
    return 10.0 * math.log10(signal / (interference + _dbm_to_mw(noise_dbm)))


def sinr_db(
    ue_position: tuple[float, float],
    serving_cell: int,
    cells: list[CellConfig],
    params: PathlossParams,
    noise_dbm: float,
    shadowing_by_cell: dict[int, float] | None = None,
) -> float:
    """SINR computed from scratch for a UE position and serving cell."""
    shadow = shadowing_by_cell or {}
    rsrp = {
        c.id: rsrp_dbm(c, ue_position, params, shadow.get(c.id, 0.0)) for c in cells
    }
    return sinr_db_from_rsrp(rsrp, serving_cell, noise_dbm)


def ue_throughput_bps(
    demand_bps: float,
    bandwidth_hz: float,
    sinr_db: float,
    n_active: int,
    efficiency_cap: float = DEFAULT_EFFICIENCY_CAP,
) -> float:
    """Rate of one UE under equal bandwidth sharing, demand-clamped.

    ``min(demand, bandwidth/n_active * min(log2(1 + sinr), cap))`` with the
    SINR taken in linear units.
    """
    if n_active < 1:
        raise ParameterError("n_active must be >= 1")
    efficiency = min(math.log2(1.0 + 10.0 ** (sinr_db / 10.0)), efficiency_cap)
    return min(demand_bps, bandwidth_hz / n_active * efficiency)


def cell_load(
    cell: CellConfig,
    attached_demands_bps,
    reference_efficiency: float = DEFAULT_REFERENCE_EFFICIENCY,
) -> float:
    """Demand-based utilization: total attached demand over nominal capacity
    (bandwidth times the reference efficiency). May exceed 1."""
    capacity = cell.bandwidth_hz * reference_efficiency
    total = sum(attached_demands_bps)
    return max(total / capacity, 0.0)
