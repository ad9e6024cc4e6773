import numpy as np
import pytest

from gasliftopt.exact import objective_for
from gasliftopt.formulation import (
    RegionAssignment,
    build_early_fixed_lp,
    dump_lp,
    enumerate_assignments,
    pin_variable,
)
from gasliftopt.lp_solver import SimplexSolver, solve
from gasliftopt.well_model import ProblemParams, build_flow_table

HALF_OIL_AT_MAX_GAS = 478.0620314357253  # 0.5 * flow(12500, 10, 0.5, 100), by hand


def test_enumeration_order_and_count():
    zs = enumerate_assignments()
    assert len(zs) == 25
    assert zs[0] == RegionAssignment(0, 0)
    assert zs[-1] == RegionAssignment(4, 4)
    pairs = [(z.zgl_idx, z.zwhp_idx) for z in zs]
    assert pairs == sorted(pairs)


def test_assignment_validation_and_encoding():
    with pytest.raises(ValueError):
        RegionAssignment(5, 0)
    with pytest.raises(ValueError):
        RegionAssignment(0, -1)
    onehot = RegionAssignment(2, 4).to_binary()
    assert onehot.tolist() == [0, 0, 1, 0, 0, 0, 0, 0, 0, 1]


def test_lp_shape_and_bounds():
    params = ProblemParams(0.7, 80.0, 9000.0)
    table = build_flow_table(params)
    lp = build_early_fixed_lp(params, table, RegionAssignment(1, 2))
    assert lp.n_vars == 54
    assert lp.n_rows == 28
    assert lp.variable_names[0] == "theta[0,0]"
    assert lp.variable_names[35] == "theta[5,5]"
    assert lp.variable_names[-6:] == ["q_gl", "whp", "q_l", "q_oil", "q_water", "q_gas"]
    # weights are nonnegative, physical quantities unbounded rows aside
    assert (lp.variable_lower_bounds[:48] == 0.0).all()
    assert np.isinf(lp.variable_upper_bounds).all()
    assert (lp.variable_lower_bounds[48:] == -np.inf).all()


def test_low_region_solution_confined_to_window():
    params = ProblemParams(0.6, 90.0, 7000.0)
    table = build_flow_table(params)
    lp = build_early_fixed_lp(params, table, RegionAssignment(0, 0))
    sol = solve(lp)
    assert sol.status == "optimal"
    theta = sol.primal_values[:36].reshape(6, 6)
    mass_outside = theta.sum() - theta[:2, :2].sum()
    assert abs(mass_outside) < 1e-9
    eta_gl = sol.primal_values[36:42]
    eta_whp = sol.primal_values[42:48]
    assert np.abs(eta_gl[2:]).max() < 1e-9
    assert np.abs(eta_whp[2:]).max() < 1e-9


def test_full_water_cut_gives_zero_oil():
    params = ProblemParams(1.0, 150.0, 10000.0)
    table = build_flow_table(params)
    for z in (RegionAssignment(0, 0), RegionAssignment(2, 1)):
        sol = solve(build_early_fixed_lp(params, table, z))
        assert sol.status == "optimal"
        assert abs(sol.objective) < 1e-9


def test_top_region_optimum_matches_corner_scan():
    params = ProblemParams(0.5, 100.0, 12500.0)
    table = build_flow_table(params)
    z = RegionAssignment(4, 0)
    sol = solve(build_early_fixed_lp(params, table, z))
    assert sol.status == "optimal"
    # cap sits on the window's right edge, so the LP optimum must match the
    # best corner of the region scanned directly from the flow table
    corners = [
        (1.0 - params.bsw) * table.q_liq[k, j] for k in (4, 5) for j in (0, 1)
    ]
    assert sol.objective == pytest.approx(max(corners), abs=1e-6)
    assert sol.objective == pytest.approx(HALF_OIL_AT_MAX_GAS, abs=1e-6)


def test_window_consistency_and_phase_identities():
    rng = np.random.default_rng(7)
    for _ in range(6):
        params = ProblemParams(
            float(rng.uniform(0.5, 1.0)),
            float(rng.uniform(0.0, 300.0)),
            float(rng.uniform(4000.0, 12500.0)),
        )
        table = build_flow_table(params)
        z = RegionAssignment(int(rng.integers(0, 5)), int(rng.integers(0, 5)))
        lp = build_early_fixed_lp(params, table, z)
        sol = solve(lp)
        if sol.status != "optimal":
            continue
        eta_gl = sol.primal_values[36:42]
        eta_whp = sol.primal_values[42:48]
        for eta, idx in ((eta_gl, z.zgl_idx), (eta_whp, z.zwhp_idx)):
            assert eta.sum() == pytest.approx(1.0, abs=1e-9)
            outside = np.delete(eta, [idx, idx + 1])
            assert np.abs(outside).max() < 1e-9
        q_l, q_oil, q_water, q_gas = sol.primal_values[50:]
        assert q_oil + q_water == pytest.approx(q_l, abs=1e-9)
        assert q_gas == pytest.approx(q_oil * params.gor, abs=1e-9 * (1 + params.gor))
        q_gl = sol.primal_values[48]
        assert q_gl <= params.qgl_max + 1e-9


def test_pinning_breakpoint_recovers_table_entry():
    params = ProblemParams(0.8, 50.0, 12500.0)
    table = build_flow_table(params)
    grid = table.grid
    for k, j in ((0, 0), (3, 2), (5, 5), (0, 5)):
        z = RegionAssignment(min(k, 4), min(j, 4))
        lp = build_early_fixed_lp(params, table, z)
        pin_variable(lp, "q_gl", grid.qgl_points[k])
        pin_variable(lp, "whp", grid.whp_points[j])
        sol = solve(lp)
        assert sol.status == "optimal"
        assert sol.value(lp, "q_l") == pytest.approx(table.q_liq[k, j], abs=1e-9)
        theta = sol.primal_values[:36].reshape(6, 6)
        assert theta[k, j] == pytest.approx(1.0, abs=1e-9)


def test_pinning_above_gas_cap_is_infeasible():
    params = ProblemParams(0.6, 100.0, 4000.0)
    table = build_flow_table(params)
    lp = build_early_fixed_lp(params, table, RegionAssignment(4, 0))
    sol = solve(lp)
    assert sol.status == "infeasible"
    # matching one-LP probe used for dataset labels
    assert objective_for(params, table, RegionAssignment(4, 0)) is None


def test_dump_lp_format():
    params = ProblemParams(0.7, 80.0, 9000.0)
    table = build_flow_table(params)
    lp = build_early_fixed_lp(params, table, RegionAssignment(1, 2))
    text = dump_lp(lp)
    lines = text.splitlines()
    assert lines[0].startswith("maximize")
    assert sum(1 for ln in lines if ln.strip().startswith("r")) == 28
    assert any("<= 9000" in ln for ln in lines)
    assert "bounds" in text
