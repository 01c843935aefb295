"""Propagation, link-budget, and load tests against independent arithmetic."""

import math

import numpy as np
import pytest

from sigran.costs import ParameterError
from sigran.radio import (
    CellConfig,
    PathlossParams,
    cell_load,
    pathloss_db,
    rsrp_dbm,
    shadowing_db,
    shadowing_field,
    sinr_db,
    sinr_db_from_rsrp,
    thermal_noise_dbm,
    ue_throughput_bps,
)


def _pl(sigma=0.0, exponent=3.5, ref_loss=38.57, ref_dist=1.0, seed=0):
    return PathlossParams(
        exponent=exponent,
        reference_loss_db=ref_loss,
        reference_distance_m=ref_dist,
        shadowing_sigma_db=sigma,
        seed=seed,
    )


def test_pathloss_at_reference_distance():
    assert pathloss_db(_pl(), 1.0) == 38.57


def test_pathloss_distance_doubling_with_exponent_two():
    p = _pl(exponent=2.0, ref_dist=10.0)
    delta = pathloss_db(p, 20.0) - pathloss_db(p, 10.0)
    assert delta == pytest.approx(20.0 * math.log10(2.0), abs=1e-9)  # 6.0206 dB


def test_pathloss_long_range_value():
    # independently recomputed: L0 + 10*n*log10(d/d0)
    got = pathloss_db(_pl(), 400.0)
    assert got == pytest.approx(38.57 + 35.0 * math.log10(400.0), abs=1e-12)


def test_pathloss_clamps_inside_reference_radius():
    p = _pl(ref_dist=5.0)
    assert pathloss_db(p, 0.01) == pathloss_db(p, 5.0)


def test_pathloss_rejects_non_finite_distance():
    with pytest.raises(ParameterError):
        pathloss_db(_pl(), float("nan"))


def test_pathloss_params_validation():
    with pytest.raises(ParameterError):
        PathlossParams(exponent=0.0)
    with pytest.raises(ParameterError):
        PathlossParams(reference_distance_m=-1.0)
    with pytest.raises(ParameterError):
        PathlossParams(shadowing_sigma_db=-0.1)


def test_rsrp_at_reference_distance():
    cell = CellConfig(id=1, position=(0.0, 0.0), tx_power_dbm=46.0)
    assert rsrp_dbm(cell, (1.0, 0.0), _pl()) == 46.0 - 38.57


def test_rsrp_strictly_decreasing_beyond_reference():
    cell = CellConfig(id=1, position=(0.0, 0.0))
    p = _pl()
    values = [rsrp_dbm(cell, (d, 0.0), p) for d in np.linspace(1.0, 2000.0, 200)]
    assert all(a > b for a, b in zip(values[:-1], values[1:]))


def test_rsrp_midpoint_symmetry():
    a = CellConfig(id=1, position=(0.0, 0.0))
    b = CellConfig(id=2, position=(400.0, 0.0))
    p = _pl()
    mid = (200.0, 0.0)
    assert rsrp_dbm(a, mid, p) == pytest.approx(rsrp_dbm(b, mid, p), abs=1e-12)


def test_sinr_single_cell_reduces_to_snr():
    rsrp = {1: -80.0}
    noise = -98.0
    assert sinr_db_from_rsrp(rsrp, 1, noise) == pytest.approx(-80.0 - (-98.0), abs=1e-12)


def test_sinr_two_equal_cells_negligible_noise():
    rsrp = {1: -70.0, 2: -70.0}
    assert sinr_db_from_rsrp(rsrp, 1, -300.0) == pytest.approx(0.0, abs=1e-9)


def test_sinr_three_cell_linear_domain_oracle():
    cells = [
        CellConfig(id=1, position=(0.0, 0.0)),
        CellConfig(id=2, position=(400.0, 0.0)),
        CellConfig(id=3, position=(0.0, 500.0)),
    ]
    p = _pl()
    pos = (150.0, 120.0)
    noise = thermal_noise_dbm(5e6, 9.0)
    got = sinr_db(pos, 1, cells, p, noise)
    # independent recomputation in the linear domain
    def lin(dbm):
        return 10.0 ** (dbm / 10.0)
    powers = {
        c.id: 46.0
        - (38.57 + 35.0 * math.log10(math.hypot(pos[0] - c.position[0], pos[1] - c.position[1])))
        for c in cells
    }
    expect = 10.0 * math.log10(lin(powers[1]) / (lin(powers[2]) + lin(powers[3]) + lin(noise)))
    assert got == pytest.approx(expect, abs=1e-12)


def test_sinr_requires_serving_measurement():
    with pytest.raises(ParameterError):
        sinr_db_from_rsrp({1: -80.0}, 2, -98.0)


def test_thermal_noise_five_mhz():
    # -174 dBm/Hz + 10log10(5e6) + 9 dB
    assert thermal_noise_dbm(5e6, 9.0) == pytest.approx(-174.0 + 10 * math.log10(5e6) + 9.0)


def test_throughput_demand_limited():
    assert ue_throughput_bps(2e6, 5e6, 60.0, 1) == 2e6


def test_throughput_vanishes_at_deep_fade():
    assert ue_throughput_bps(2e6, 5e6, -1000.0, 1) < 1e-6


def test_throughput_shared_bandwidth_hand_computation():
    sinr = 7.0
    eff = min(math.log2(1.0 + 10.0 ** (sinr / 10.0)), 6.0)
    expect = min(10e6, 5e6 / 20 * eff)
    assert ue_throughput_bps(10e6, 5e6, sinr, 20) == pytest.approx(expect, rel=1e-12)


def test_throughput_efficiency_cap():
    # at very high SINR the spectral efficiency saturates at the cap
    assert ue_throughput_bps(1e9, 5e6, 200.0, 1, efficiency_cap=6.0) == pytest.approx(3e7)


def test_cell_load_basics():
    cell = CellConfig(id=1, position=(0.0, 0.0), bandwidth_hz=5e6)
    assert cell_load(cell, []) == 0.0
    # nominal capacity is bandwidth * reference efficiency (2 bps/Hz)
    assert cell_load(cell, [1e7]) == 1.0
    assert cell_load(cell, [1e7, 1e7]) == 2.0


def test_scenario_initial_load_ordering():
    from sigran.scenario import builtin_scenario

    sc = builtin_scenario("paper-fig7")
    loads = {
        c.id: cell_load(c, [c.background_demand_bps] * c.background_ues)
        for c in sc.cells
    }
    assert loads[3] < loads[1]
    assert loads[3] < loads[2]


def test_shadowing_deterministic_and_keyed():
    p = _pl(sigma=8.0, seed=123)
    f1 = shadowing_field(p, 4, 3, tick=7)
    f2 = shadowing_field(p, 4, 3, tick=7)
    assert np.array_equal(f1, f2)
    assert shadowing_db(p, 2, 1, 7, 4, 3) == f1[2, 1]
    f3 = shadowing_field(p, 4, 3, tick=8)
    assert not np.array_equal(f1, f3)
    other_seed = shadowing_field(_pl(sigma=8.0, seed=124), 4, 3, tick=7)
    assert not np.array_equal(f1, other_seed)


def test_shadowing_sigma_zero_is_exactly_zero():
    f = shadowing_field(_pl(sigma=0.0), 5, 3, tick=2)
    assert not f.any()


def test_cell_config_validation():
    with pytest.raises(ParameterError):
        CellConfig(id=1, position=(0.0, 0.0), bandwidth_hz=0.0)
    with pytest.raises(ParameterError):
        CellConfig(id=1, position=(0.0, 0.0), background_ues=-1)
    with pytest.raises(ParameterError):
        CellConfig(id=1, position=(0.0, 0.0), tx_power_dbm=float("inf"))
