"""Early-fixed LP construction for the gas-lift production problem.

The well's liquid flow is replaced by a convex combination of tabulated
breakpoint values (weights theta).  Axis marginals (eta) restrict the active
weights to one grid interval per axis; fixing the interval choice up front
removes every combinatorial degree of freedom, so each region yields a plain
LP.  Variable order: 36 theta (row-major over the 6x6 grid), 6 eta_gl,
6 eta_whp, then q_gl, whp, q_l, q_oil, q_water, q_gas.
"""

from dataclasses import dataclass, field

import numpy as np

from .well_model import FlowTable, ProblemParams

N_INTERVALS = 5  # intervals per axis on the default 6-point grids

LEQ = "<="
EQ = "="
GEQ = ">="


@dataclass(frozen=True)
class RegionAssignment:
    """Selected grid interval per axis: qgl interval ``zgl_idx``, whp interval ``zwhp_idx``."""

    zgl_idx: int
    zwhp_idx: int

    def __post_init__(self):
        for name, idx in (("zgl_idx", self.zgl_idx), ("zwhp_idx", self.zwhp_idx)):
            if not 0 <= idx < N_INTERVALS:
                raise ValueError(f"{name} must be in 0..{N_INTERVALS - 1}, got {idx}")

    def to_binary(self) -> np.ndarray:
        """One-hot encoding, 5 bits per axis (10 total)."""
        out = np.zeros(2 * N_INTERVALS)
        out[self.zgl_idx] = 1.0
        out[N_INTERVALS + self.zwhp_idx] = 1.0
        return out


def enumerate_assignments() -> list[RegionAssignment]:
    """All 25 interval choices, lexicographic in (zgl_idx, zwhp_idx)."""
    return [
        RegionAssignment(k, j)
        for k in range(N_INTERVALS)
        for j in range(N_INTERVALS)
    ]


@dataclass
class LinearProgram:
    """Maximize ``objective_coeffs @ x`` subject to rows of mixed sense and box bounds."""

    objective_coeffs: np.ndarray
    constraint_matrix: np.ndarray
    constraint_senses: list
    rhs: np.ndarray
    variable_lower_bounds: np.ndarray
    variable_upper_bounds: np.ndarray
    variable_names: list

    def __post_init__(self):
        m, n = self.constraint_matrix.shape
        if not (
            len(self.objective_coeffs) == n
            and len(self.rhs) == m
            and len(self.constraint_senses) == m
            and len(self.variable_lower_bounds) == n
            and len(self.variable_upper_bounds) == n
            and len(self.variable_names) == n
        ):
            raise ValueError("inconsistent LP dimensions")
        bad = set(self.constraint_senses) - {LEQ, EQ, GEQ}
        if bad:
            raise ValueError(f"unknown constraint senses {bad}")

    @property
    def n_vars(self) -> int:
        return self.constraint_matrix.shape[1]

    @property
    def n_rows(self) -> int:
        return self.constraint_matrix.shape[0]

    def var_index(self, name: str) -> int:
        return self.variable_names.index(name)


@dataclass
class Solution:
    """LP solve outcome; primal values align with the LP's variable_names."""

    status: str  # "optimal" | "infeasible" | "unbounded"
    objective: float | None = None
    primal_values: np.ndarray | None = None

    def value(self, lp: LinearProgram, name: str) -> float:
        return float(self.primal_values[lp.var_index(name)])


def variable_names(table: FlowTable) -> list:
    nq, nw = table.grid.n_qgl, table.grid.n_whp
    names = [f"theta[{k},{j}]" for k in range(nq) for j in range(nw)]
    names += [f"eta_gl[{k}]" for k in range(nq)]
    names += [f"eta_whp[{j}]" for j in range(nw)]
    names += ["q_gl", "whp", "q_l", "q_oil", "q_water", "q_gas"]
    return names


def build_early_fixed_lp(
    params: ProblemParams, table: FlowTable, z: RegionAssignment
) -> LinearProgram:
    """LP for one region: SOS2 structure resolved by zeroing every marginal
    outside the selected interval pair.

    Rows: three convex-combination identities tying q_gl/whp/q_l to the
    breakpoint table, the unit-mass row for theta, the marginal definitions
    of both eta families, the zero-fixing rows implied by ``z``, the phase
    separation identities, and the lift-gas cap.  Objective: maximize q_oil.
    """
    grid = table.grid
    nq, nw = grid.n_qgl, grid.n_whp
    n_theta = nq * nw
    names = variable_names(table)
    n = len(names)

    i_eta_gl = n_theta
    i_eta_whp = n_theta + nq
    i_qgl, i_whp, i_ql, i_qoil, i_qwater, i_qgas = range(n_theta + nq + nw, n)

    def theta_col(k, j):
        return k * nw + j

    rows, senses, rhs = [], [], []

    def add_row(coeffs: dict, sense: str, b: float):
        row = np.zeros(n)
        for idx, c in coeffs.items():
            row[idx] = c
        rows.append(row)
        senses.append(sense)
        rhs.append(b)

    # convex-combination identities
    qgl_row = {theta_col(k, j): grid.qgl_points[k] for k in range(nq) for j in range(nw)}
    qgl_row[i_qgl] = -1.0
    add_row(qgl_row, EQ, 0.0)

    whp_row = {theta_col(k, j): grid.whp_points[j] for k in range(nq) for j in range(nw)}
    whp_row[i_whp] = -1.0
    add_row(whp_row, EQ, 0.0)

    ql_row = {theta_col(k, j): table.q_liq[k, j] for k in range(nq) for j in range(nw)}
    ql_row[i_ql] = -1.0
    add_row(ql_row, EQ, 0.0)

    add_row({theta_col(k, j): 1.0 for k in range(nq) for j in range(nw)}, EQ, 1.0)

    # axis marginals
    for k in range(nq):
        row = {theta_col(k, j): 1.0 for j in range(nw)}
        row[i_eta_gl + k] = -1.0
        add_row(row, EQ, 0.0)
    for j in range(nw):
        row = {theta_col(k, j): 1.0 for k in range(nq)}
        row[i_eta_whp + j] = -1.0
        add_row(row, EQ, 0.0)

    # region fixing: marginals vanish outside the selected interval pair
    active_k = {z.zgl_idx, z.zgl_idx + 1}
    active_j = {z.zwhp_idx, z.zwhp_idx + 1}
    for k in range(nq):
        if k not in active_k:
            add_row({i_eta_gl + k: 1.0}, EQ, 0.0)
    for j in range(nw):
        if j not in active_j:
            add_row({i_eta_whp + j: 1.0}, EQ, 0.0)

    # separator phase split
    add_row({i_qoil: 1.0, i_ql: -(1.0 - params.bsw)}, EQ, 0.0)
    add_row({i_qwater: 1.0, i_ql: -params.bsw}, EQ, 0.0)
    add_row({i_qgas: 1.0, i_ql: -(1.0 - params.bsw) * params.gor}, EQ, 0.0)

    # lift-gas availability
    add_row({i_qgl: 1.0}, LEQ, params.qgl_max)

    lb = np.full(n, -np.inf)
    ub = np.full(n, np.inf)
    lb[: n_theta + nq + nw] = 0.0  # theta and eta are nonnegative weights

    c = np.zeros(n)
    c[i_qoil] = 1.0

    return LinearProgram(
        objective_coeffs=c,
        constraint_matrix=np.array(rows),
        constraint_senses=senses,
        rhs=np.array(rhs),
        variable_lower_bounds=lb,
        variable_upper_bounds=ub,
        variable_names=names,
    )


def pin_variable(lp: LinearProgram, name: str, value: float) -> None:
    """Fix a variable through its bounds (lb = ub = value), in place."""
    i = lp.var_index(name)
    lp.variable_lower_bounds[i] = value
    lp.variable_upper_bounds[i] = value


def dump_lp(lp: LinearProgram) -> str:
    """Human-readable dump: objective, one constraint per line, then bounds."""

    def term(c, name):
        return f"{c:+.6g}*{name}"

    lines = []
    obj = " ".join(
        term(c, v) for c, v in zip(lp.objective_coeffs, lp.variable_names) if c != 0.0
    )
    lines.append(f"maximize {obj}")
    lines.append("subject to")
    for i in range(lp.n_rows):
        row = lp.constraint_matrix[i]
        body = " ".join(
            term(row[j], lp.variable_names[j]) for j in np.nonzero(row)[0]
        )
        if not body:
            body = "0"
        lines.append(f"  r{i}: {body} {lp.constraint_senses[i]} {lp.rhs[i]:.6g}")
    lines.append("bounds")
    for j, name in enumerate(lp.variable_names):
        lo, hi = lp.variable_lower_bounds[j], lp.variable_upper_bounds[j]
        if lo == -np.inf and hi == np.inf:
            lines.append(f"  {name} free")
        else:
            lo_s = "-inf" if lo == -np.inf else f"{lo:.6g}"
            hi_s = "+inf" if hi == np.inf else f"{hi:.6g}"
            lines.append(f"  {lo_s} <= {name} <= {hi_s}")
    return "\n".join(lines)
