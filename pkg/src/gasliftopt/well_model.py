"""Synthetic gas-lifted well model and the grids used to linearize it.

The well maps lift-gas injection rate (qgl) and wellhead pressure (whp) to a
liquid flow rate, modulated by the liquid's water fraction (bsw) and gas-oil
ratio (gor).  Operating points that cannot sustain flow are marked with -1,
and that marker propagates verbatim into the tabulated flow grids.
"""

import json
from dataclasses import dataclass

import numpy as np

INFEASIBLE_FLOW = -1.0

BSW_RANGE = (0.5, 1.0)
GOR_RANGE = (0.0, 300.0)
QGL_MAX_RANGE = (4000.0, 12500.0)


@dataclass(frozen=True)
class ProblemParams:
    """Instance parameters: water fraction, gas-oil ratio and lift-gas cap."""

    bsw: float
    gor: float
    qgl_max: float

    def __post_init__(self):
        if not BSW_RANGE[0] <= self.bsw <= BSW_RANGE[1]:
            raise ValueError(f"bsw {self.bsw} outside {BSW_RANGE}")
        if not GOR_RANGE[0] <= self.gor <= GOR_RANGE[1]:
            raise ValueError(f"gor {self.gor} outside {GOR_RANGE}")
        if not QGL_MAX_RANGE[0] <= self.qgl_max <= QGL_MAX_RANGE[1]:
            raise ValueError(f"qgl_max {self.qgl_max} outside {QGL_MAX_RANGE}")

    def as_vector(self) -> np.ndarray:
        return np.array([self.bsw, self.gor, self.qgl_max], dtype=float)


@dataclass(frozen=True)
class BreakpointGrid:
    """Breakpoints along the lift-gas and wellhead-pressure axes."""

    qgl_points: tuple
    whp_points: tuple

    def __post_init__(self):
        for name, pts in (("qgl_points", self.qgl_points), ("whp_points", self.whp_points)):
            if any(b <= a for a, b in zip(pts, pts[1:])):
                raise ValueError(f"{name} must be strictly increasing, got {pts}")

    @property
    def n_qgl(self) -> int:
        return len(self.qgl_points)

    @property
    def n_whp(self) -> int:
        return len(self.whp_points)


def default_grid() -> BreakpointGrid:
    """Fixed 6x6 grid shared by every instance."""
    return BreakpointGrid(
        qgl_points=(0.0, 2500.0, 5000.0, 7500.0, 10000.0, 12500.0),
        whp_points=(10.0, 24.0, 38.0, 52.0, 66.0, 80.0),
    )


def synthetic_liquid_flow(qgl: float, whp: float, bsw: float, gor: float) -> float:
    """Liquid flow at an operating point, or -1.0 when the well cannot lift.

    The point is infeasible exactly when qgl < max(0, 125*(whp - 40)), i.e.
    high backpressure demands a minimum gas rate.  On the feasible set the
    flow is a saturating function of gas rate, derated linearly by pressure
    and water fraction: nondecreasing in qgl and gor, decreasing in whp and
    bsw.
    """
    if qgl < 0.0:
        raise ValueError(f"qgl must be >= 0, got {qgl}")
    if not 0.0 < whp < 120.0:
        raise ValueError(f"whp must be in (0, 120), got {whp}")
    if qgl < 125.0 * (whp - 40.0):
        return INFEASIBLE_FLOW
    lift = 1.0 - np.exp(-(qgl + 10.0 * gor) / 4000.0)
    backpressure = 1.0 - whp / 120.0
    derate = 1.1 - 0.4 * bsw
    return float(1200.0 * lift * backpressure * derate)


@dataclass(frozen=True)
class FlowTable:
    """Liquid flows tabulated at every grid breakpoint.

    ``q_liq[k, j]`` is the flow at ``(qgl_points[k], whp_points[j])``;
    -1 entries mark infeasible combinations.
    """

    grid: BreakpointGrid
    q_liq: np.ndarray

    def __post_init__(self):
        expected = (self.grid.n_qgl, self.grid.n_whp)
        if self.q_liq.shape != expected:
            raise ValueError(f"q_liq shape {self.q_liq.shape} != {expected}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "qgl_points": list(self.grid.qgl_points),
                "whp_points": list(self.grid.whp_points),
                "q_liq": [list(row) for row in self.q_liq],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "FlowTable":
        obj = json.loads(text)
        grid = BreakpointGrid(tuple(obj["qgl_points"]), tuple(obj["whp_points"]))
        return cls(grid=grid, q_liq=np.array(obj["q_liq"], dtype=float))


def build_flow_table(params: ProblemParams, grid: BreakpointGrid | None = None) -> FlowTable:
    """Tabulate the well at every breakpoint of the grid."""
    grid = grid or default_grid()
    q_liq = np.empty((grid.n_qgl, grid.n_whp))
    for k, qgl in enumerate(grid.qgl_points):
        for j, whp in enumerate(grid.whp_points):
            q_liq[k, j] = synthetic_liquid_flow(qgl, whp, params.bsw, params.gor)
    return FlowTable(grid=grid, q_liq=q_liq)
