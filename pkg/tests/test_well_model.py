import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gasliftopt.well_model import (
    BreakpointGrid,
    FlowTable,
    ProblemParams,
    build_flow_table,
    default_grid,
    synthetic_liquid_flow,
)

# frozen from independent hand evaluation of the closed form
FLOW_AT_MAX_GAS_LOW_WHP = 956.1240628714506


def test_default_grid_values():
    grid = default_grid()
    assert grid.qgl_points == (0.0, 2500.0, 5000.0, 7500.0, 10000.0, 12500.0)
    assert grid.whp_points == (10.0, 24.0, 38.0, 52.0, 66.0, 80.0)
    assert grid.whp_points[0] == 10.0
    assert grid.whp_points[5] == 80.0
    assert grid.qgl_points[2] == 5000.0


def test_grid_must_increase():
    with pytest.raises(ValueError):
        BreakpointGrid(qgl_points=(0.0, 0.0, 1.0), whp_points=(10.0, 20.0, 30.0))
    with pytest.raises(ValueError):
        BreakpointGrid(qgl_points=(0.0, 1.0, 2.0), whp_points=(30.0, 20.0, 10.0))


def test_flow_known_values():
    assert synthetic_liquid_flow(0.0, 10.0, 0.5, 0.0) == 0.0
    assert synthetic_liquid_flow(2500.0, 80.0, 0.7, 100.0) == -1.0
    assert synthetic_liquid_flow(12500.0, 10.0, 0.5, 100.0) == pytest.approx(
        FLOW_AT_MAX_GAS_LOW_WHP, abs=1e-9
    )


def test_flow_boundary_of_frontier_is_feasible():
    # qgl exactly at 125 * (whp - 40)
    assert synthetic_liquid_flow(5000.0, 80.0, 0.5, 100.0) >= 0.0
    assert synthetic_liquid_flow(4999.9, 80.0, 0.5, 100.0) == -1.0


def test_flow_preconditions():
    with pytest.raises(ValueError):
        synthetic_liquid_flow(-1.0, 10.0, 0.5, 0.0)
    with pytest.raises(ValueError):
        synthetic_liquid_flow(0.0, 0.0, 0.5, 0.0)
    with pytest.raises(ValueError):
        synthetic_liquid_flow(0.0, 120.0, 0.5, 0.0)


@given(
    qgl=st.floats(0.0, 12500.0),
    whp=st.floats(0.5, 119.5),
    bsw=st.floats(0.5, 1.0),
    gor=st.floats(0.0, 300.0),
)
def test_frontier_equivalence(qgl, whp, bsw, gor):
    flow = synthetic_liquid_flow(qgl, whp, bsw, gor)
    if qgl < 125.0 * (whp - 40.0):
        assert flow == -1.0
    else:
        assert flow >= 0.0


@given(
    qgl1=st.floats(0.0, 12500.0),
    qgl2=st.floats(0.0, 12500.0),
    whp=st.floats(0.5, 39.5),  # feasible for any qgl
    bsw=st.floats(0.5, 1.0),
    gor=st.floats(0.0, 300.0),
)
def test_flow_nondecreasing_in_qgl(qgl1, qgl2, whp, bsw, gor):
    lo, hi = sorted((qgl1, qgl2))
    assert synthetic_liquid_flow(hi, whp, bsw, gor) >= synthetic_liquid_flow(
        lo, whp, bsw, gor
    )


def test_flow_strict_monotonicities_on_separated_points():
    base = synthetic_liquid_flow(6000.0, 30.0, 0.7, 150.0)
    assert synthetic_liquid_flow(7000.0, 30.0, 0.7, 150.0) > base
    assert synthetic_liquid_flow(6000.0, 35.0, 0.7, 150.0) < base
    assert synthetic_liquid_flow(6000.0, 30.0, 0.8, 150.0) < base
    assert synthetic_liquid_flow(6000.0, 30.0, 0.7, 200.0) > base


def test_flow_deterministic():
    args = (8321.7, 47.3, 0.62, 118.4)
    assert synthetic_liquid_flow(*args) == synthetic_liquid_flow(*args)


def test_params_validation():
    with pytest.raises(ValueError):
        ProblemParams(0.4, 100.0, 8000.0)
    with pytest.raises(ValueError):
        ProblemParams(0.6, 301.0, 8000.0)
    with pytest.raises(ValueError):
        ProblemParams(0.6, 100.0, 3000.0)
    ProblemParams(0.5, 0.0, 4000.0)
    ProblemParams(1.0, 300.0, 12500.0)


def test_build_flow_table_delegates_to_flow():
    params = ProblemParams(0.73, 141.0, 9000.0)
    table = build_flow_table(params)
    grid = table.grid
    for k in range(6):
        for j in range(6):
            expected = synthetic_liquid_flow(
                grid.qgl_points[k], grid.whp_points[j], params.bsw, params.gor
            )
            assert table.q_liq[k, j] == expected


def test_flow_table_known_entries():
    table = build_flow_table(ProblemParams(0.5, 100.0, 12500.0))
    assert table.q_liq[5, 0] == pytest.approx(FLOW_AT_MAX_GAS_LOW_WHP, abs=1e-9)
    assert table.q_liq[0, 5] == -1.0
    zero_gor = build_flow_table(ProblemParams(0.5, 0.0, 12500.0))
    assert zero_gor.q_liq[0, 0] == 0.0


def test_infeasible_entries_only_where_frontier_says():
    table = build_flow_table(ProblemParams(0.9, 55.0, 5000.0))
    grid = table.grid
    for k in range(6):
        for j in range(6):
            infeasible = grid.qgl_points[k] < 125.0 * (grid.whp_points[j] - 40.0)
            assert (table.q_liq[k, j] == -1.0) == infeasible


def test_flow_table_json_round_trip():
    table = build_flow_table(ProblemParams(0.66, 210.0, 11000.0))
    text = table.to_json()
    payload = json.loads(text)
    assert set(payload) == {"qgl_points", "whp_points", "q_liq"}
    assert len(payload["q_liq"]) == 6 and len(payload["q_liq"][0]) == 6
    back = FlowTable.from_json(text)
    assert back.grid == table.grid
    assert np.array_equal(back.q_liq, table.q_liq)
