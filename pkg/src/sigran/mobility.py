"""Handover policies and the tick-driven mobility simulation.

Two policies are compared:

* distributed A3: each handover is triggered locally when the best
  neighbor's RSRP exceeds the serving cell's by the hysteresis margin for
  the time-to-trigger, and always targets the strongest neighbor. No load
  information is used.
* centralized load-aware: the same A3 entry condition, but the controller
  sees every cell's load; among the cells whose RSRP is within the
  similarity window of the strongest measurement (and which pass the A3
  condition against the serving cell) it picks the least loaded one, ties
  broken by higher RSRP and then by lower cell id.

The simulation advances in fixed ticks. Per tick: mover positions update,
RSRP is measured for every (UE, cell) pair (with per-tick shadowing),
newly departed UEs attach to the strongest cell, handover decisions are
evaluated against the tick's load snapshot and applied, then throughput is
accounted with equal bandwidth sharing per cell. Runs are a pure function
of (scenario, policy, seed).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .costs import ParameterError
from .radio import (
    CellConfig,
    PathlossParams,
    cell_load,
    pathloss_db,
    shadowing_field,
    sinr_db_from_rsrp,
    thermal_noise_dbm,
    ue_throughput_bps,
)
from .scenario import Scenario

_SEED_MASK = (1 << 64) - 1


class PolicyKind(Enum):
    DISTRIBUTED_A3 = "distributed-a3"
    CENTRALIZED_LOAD_AWARE = "centralized-load-aware"


@dataclass(frozen=True)
class HandoverPolicyConfig:
    kind: PolicyKind
    hysteresis_db: float = 3.0
    time_to_trigger_ms: float = 256.0
    similarity_window_db: float = 3.0

    def __post_init__(self):
        if self.hysteresis_db < 0:
            raise ParameterError("hysteresis_db must be >= 0")
        if self.time_to_trigger_ms < 0:
            raise ParameterError("time_to_trigger_ms must be >= 0")
        if self.similarity_window_db < 0:
            raise ParameterError("similarity_window_db must be >= 0")


@dataclass(frozen=True)
class HandoverDecision:
    ue: int
    target_cell: int


@dataclass(frozen=True)
class HandoverEvent:
    time_ms: float
    ue: int
    source_cell: int
    target_cell: int


@dataclass
class UeState:
    """Mutable per-UE simulation state."""

    id: int
    start: tuple[float, float]
    velocity: tuple[float, float]
    demand_bps: float
    depart_ms: float = 0.0
    serving_cell: int | None = None
    a3_timer_ms: float = 0.0
    attached: bool = False
    pinned_cell: int | None = None
    stop_at: tuple[float, float] | None = None
    position: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        self.position = self.start

    def position_at(self, t_ms: float) -> tuple[float, float]:
        """Closed-form position: linear motion from the departure time,
        parked at ``stop_at`` once reached."""
        dt_s = max(0.0, (t_ms - self.depart_ms) / 1000.0)
        x = self.start[0] + self.velocity[0] * dt_s
        y = self.start[1] + self.velocity[1] * dt_s
        if self.stop_at is not None:
            travelled = math.hypot(x - self.start[0], y - self.start[1])
            reach = math.hypot(
                self.stop_at[0] - self.start[0], self.stop_at[1] - self.start[1]
            )
            if travelled >= reach:
                return self.stop_at
        return (x, y)


def _best_neighbor(measurements: dict[int, float], serving: int):
    neighbors = [(cid, r) for cid, r in measurements.items() if cid != serving]
    if not neighbors:
        return None
    return min(neighbors, key=lambda kv: (-kv[1], kv[0]))


def _ttt_fire(ue: UeState, entered: bool, cfg: HandoverPolicyConfig, dt_ms: float) -> bool:
    """Advance or reset the A3 timer; True when the trigger matures."""
    if not entered:
        ue.a3_timer_ms = 0.0
        return False
    ue.a3_timer_ms = min(ue.a3_timer_ms + dt_ms, cfg.time_to_trigger_ms)
    if ue.a3_timer_ms >= cfg.time_to_trigger_ms:
        ue.a3_timer_ms = 0.0
        return True
    return False


def a3_decide(
    ue: UeState,
    measurements: dict[int, float],
    cfg: HandoverPolicyConfig,
    dt_ms: float,
) -> HandoverDecision | None:
    """Strongest-neighbor handover with hysteresis and time-to-trigger."""
    if ue.serving_cell is None:
        return None
    serving = measurements[ue.serving_cell]
    best = _best_neighbor(measurements, ue.serving_cell)
    entered = best is not None and best[1] > serving + cfg.hysteresis_db
    if _ttt_fire(ue, entered, cfg, dt_ms):
        return HandoverDecision(ue.id, best[0])
    return None


def centralized_decide(
    ue: UeState,
    measurements: dict[int, float],
    loads: dict[int, float],
    cfg: HandoverPolicyConfig,
    dt_ms: float,
) -> HandoverDecision | None:
    """Load-aware handover among RSRP-similar candidates."""
    if ue.serving_cell is None:
        return None
    serving = measurements[ue.serving_cell]
    best = _best_neighbor(measurements, ue.serving_cell)
    entered = best is not None and best[1] > serving + cfg.hysteresis_db
    if not _ttt_fire(ue, entered, cfg, dt_ms):
        return None
    top = max(measurements.values())
    candidates = [
        cid
        for cid, r in measurements.items()
        if cid != ue.serving_cell
        and r >= top - cfg.similarity_window_db
        and r > serving + cfg.hysteresis_db
    ]
    target = min(candidates, key=lambda c: (loads[c], -measurements[c], c))
    return HandoverDecision(ue.id, target)


@dataclass
class MobilityStats:
    """Outcome of one (scenario, policy, seed) run."""

    scenario: str
    policy: PolicyKind
    seed: int
    tick_ms: float
    system_throughput_bps: list[float] = field(default_factory=list)
    records: list[tuple] = field(default_factory=list)  # (tick, ue, cell, rsrp, sinr, rate)
    handovers: list[HandoverEvent] = field(default_factory=list)

    @property
    def handover_count(self) -> int:
        return len(self.handovers)

    @property
    def mean_system_throughput_bps(self) -> float:
        if not self.system_throughput_bps:
            return 0.0
        return float(np.mean(self.system_throughput_bps))


def materialize_ues(scenario: Scenario, seed: int) -> list[UeState]:
    """Expand a scenario into concrete UEs for one run.

    Explicit UEs come first (their configured ids), then seeded template
    movers, then the static background UEs placed on a ring around their
    home cell. Template draws happen in a fixed order (jitter x, jitter y,
    target, departure per mover), so the expansion is deterministic per
    seed.
    """
    ues = [
        UeState(
            id=u.id,
            start=u.start,
            velocity=u.velocity,
            demand_bps=u.demand_bps,
            depart_ms=u.depart_s * 1000.0,
        )
        for u in scenario.ues
    ]
    next_id = max((u.id for u in ues), default=-1) + 1

    tpl = scenario.movers
    if tpl is not None and tpl.count:
        rng = np.random.default_rng(seed & _SEED_MASK)
        phase = rng.uniform(0.0, tpl.depart_window_s) if tpl.depart_window_s else 0.0
        for i in range(tpl.count):
            jx = rng.uniform(-tpl.start_jitter_m, tpl.start_jitter_m)
            jy = rng.uniform(-tpl.start_jitter_m, tpl.start_jitter_m)
            u = rng.uniform(0.0, 1.0)
            if tpl.depart_mode == "staggered":
                depart = phase + i * tpl.depart_spacing_s
            else:
                depart = rng.uniform(0.0, tpl.depart_window_s) if tpl.depart_window_s else 0.0
            start = (tpl.start_center[0] + jx, tpl.start_center[1] + jy)
            target = (
                tpl.target_a[0] + u * (tpl.target_b[0] - tpl.target_a[0]),
                tpl.target_a[1] + u * (tpl.target_b[1] - tpl.target_a[1]),
            )
            dist = math.hypot(target[0] - start[0], target[1] - start[1])
            vel = (
                (target[0] - start[0]) / dist * tpl.speed_mps,
                (target[1] - start[1]) / dist * tpl.speed_mps,
            )
            ues.append(
                UeState(
                    id=next_id,
                    start=start,
                    velocity=vel,
                    demand_bps=tpl.demand_bps,
                    depart_ms=depart * 1000.0,
                    stop_at=target if tpl.stop_at_target else None,
                )
            )
            next_id += 1

    for cell in scenario.cells:
        for j in range(cell.background_ues):
            angle = 2.0 * math.pi * j / cell.background_ues
            pos = (
                cell.position[0] + scenario.background_ring_m * math.cos(angle),
                cell.position[1] + scenario.background_ring_m * math.sin(angle),
            )
            ues.append(
                UeState(
                    id=next_id,
                    start=pos,
                    velocity=(0.0, 0.0),
                    demand_bps=cell.background_demand_bps,
                    pinned_cell=cell.id,
                )
            )
            next_id += 1
    return ues


def run_mobility(
    scenario: Scenario,
    policy: HandoverPolicyConfig,
    seed: int = 0,
    duration_s: float | None = None,
    tick_ms: float | None = None,
) -> MobilityStats:
    """Simulate one policy over a scenario; see the module docstring for
    the per-tick order of operations."""
    duration = scenario.duration_s if duration_s is None else duration_s
    tick = scenario.tick_ms if tick_ms is None else tick_ms
    if duration <= 0 or tick <= 0:
        raise ParameterError("duration and tick must be positive")

    pl = replace(scenario.pathloss, seed=seed)
    cells = list(scenario.cells)
    cell_index = {c.id: i for i, c in enumerate(cells)}
    noise = {c.id: thermal_noise_dbm(c.bandwidth_hz, scenario.noise_figure_db) for c in cells}
    ues = materialize_ues(scenario, seed)

    stats = MobilityStats(scenario.name, policy.kind, seed, tick)
    n_ticks = int(round(duration * 1000.0 / tick))

    for k in range(n_ticks):
        t_ms = k * tick
        shadow = shadowing_field(pl, len(ues), len(cells), k)

        active: list[tuple[int, UeState, dict[int, float]]] = []
        for i, ue in enumerate(ues):
            if t_ms < ue.depart_ms:
                continue
            ue.position = ue.position_at(t_ms)
            meas = {
                c.id: c.tx_power_dbm
                - pathloss_db(
                    pl,
                    math.hypot(
                        ue.position[0] - c.position[0], ue.position[1] - c.position[1]
                    ),
                    float(shadow[i, j]),
                )
                for j, c in enumerate(cells)
            }
            if not ue.attached:
                if ue.pinned_cell is not None:
                    ue.serving_cell = ue.pinned_cell
                else:
                    ue.serving_cell = min(meas, key=lambda c: (-meas[c], c))
                ue.attached = True
                ue.a3_timer_ms = 0.0
            active.append((i, ue, meas))

        demands: dict[int, list[float]] = {c.id: [] for c in cells}
        for _, ue, _ in active:
            demands[ue.serving_cell].append(ue.demand_bps)
        loads = {
            c.id: cell_load(c, demands[c.id], scenario.reference_efficiency_bps_hz)
            for c in cells
        }

        decisions: list[tuple[UeState, HandoverDecision]] = []
        for _, ue, meas in active:
            if policy.kind is PolicyKind.DISTRIBUTED_A3:
                d = a3_decide(ue, meas, policy, tick)
            else:
                d = centralized_decide(ue, meas, loads, policy, tick)
            if d is not None:
                decisions.append((ue, d))
        for ue, d in decisions:
            stats.handovers.append(
                HandoverEvent(t_ms, ue.id, ue.serving_cell, d.target_cell)
            )
            ue.serving_cell = d.target_cell

        n_active = {c.id: 0 for c in cells}
        for _, ue, _ in active:
            n_active[ue.serving_cell] += 1
        system = 0.0
        for _, ue, meas in active:
            cell = cells[cell_index[ue.serving_cell]]
            s = sinr_db_from_rsrp(meas, ue.serving_cell, noise[ue.serving_cell])
            rate = ue_throughput_bps(
                ue.demand_bps,
                cell.bandwidth_hz,
                s,
                n_active[ue.serving_cell],
                scenario.efficiency_cap_bps_hz,
            )
            system += rate
            stats.records.append((k, ue.id, ue.serving_cell, meas[ue.serving_cell], s, rate))
        stats.system_throughput_bps.append(system)

    return stats


MOBILITY_CSV_COLUMNS = ("tick", "ue", "cell", "rsrp_dbm", "sinr_db", "rate_bps")


def mobility_csv(stats: MobilityStats) -> str:
    """Per-tick per-UE records as CSV."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MOBILITY_CSV_COLUMNS)
    for rec in stats.records:
        w.writerow([rec[0], rec[1], rec[2], repr(rec[3]), repr(rec[4]), repr(rec[5])])
    return buf.getvalue()


HANDOVER_CSV_COLUMNS = ("time_ms", "ue", "source_cell", "target_cell")


def handover_csv(stats: MobilityStats) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HANDOVER_CSV_COLUMNS)
    for h in stats.handovers:
        w.writerow([repr(h.time_ms), h.ue, h.source_cell, h.target_cell])
    return buf.getvalue()


SUMMARY_CSV_COLUMNS = ("policy", "seed", "handovers", "mean_system_throughput_bps")


def summary_csv(runs: list[MobilityStats]) -> str:
    """Per-run summary rows in deterministic (policy, seed) order."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_CSV_COLUMNS)
    for st in sorted(runs, key=lambda s: (s.policy.value, s.seed)):
        w.writerow(
            [st.policy.value, st.seed, st.handover_count, repr(st.mean_system_throughput_bps)]
        )
    return buf.getvalue()


def rank_correlation(x, y) -> float:
    """Spearman rank correlation with average ranks for ties."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 2:
        raise ParameterError("rank correlation needs two equally sized series")

    def _ranks(v):
        order = np.argsort(v, kind="stable")
        ranks = np.empty(v.size)
        sv = v[order]
        i = 0
        while i < v.size:
            j = i
            while j + 1 < v.size and sv[j + 1] == sv[i]:
                j += 1
            ranks[order[i : j + 1]] = (i + j) / 2.0
            i = j + 1
        return ranks

    rx, ry = _ranks(x), _ranks(y)
    sx, sy = rx.std(), ry.std()
    if sx == 0 or sy == 0:
        return 0.0
    return float(((rx - rx.mean()) * (ry - ry.mean())).mean() / (sx * sy))
