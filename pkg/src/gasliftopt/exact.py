"""Exact solving by exhaustive enumeration of the 25 region choices.

Each region yields an LP; the exact optimum of the full problem is the best
of the 25 region optima.  Ties are broken toward the lexicographically
smallest (zgl_idx, zwhp_idx) so optimal-assignment labels are deterministic.
"""

from dataclasses import dataclass

from .formulation import RegionAssignment, build_early_fixed_lp, enumerate_assignments
from .lp_solver import OPTIMAL, SimplexConfig, SimplexSolver
from .well_model import FlowTable, ProblemParams


class AllInfeasibleError(Exception):
    """Every region's LP is infeasible for this instance."""


@dataclass
class ExactResult:
    best_objective: float
    best_assignment: RegionAssignment
    per_assignment_objectives: list  # (RegionAssignment, float | None), None = infeasible


def objective_for(
    params: ProblemParams,
    table: FlowTable,
    z: RegionAssignment,
    config: SimplexConfig | None = None,
) -> float | None:
    """Optimal oil rate with the region fixed to ``z``; None when infeasible."""
    lp = build_early_fixed_lp(params, table, z)
    sol = SimplexSolver(config).solve(lp)
    if sol.status != OPTIMAL:
        return None
    return sol.objective


def solve_exact(
    params: ProblemParams,
    table: FlowTable,
    config: SimplexConfig | None = None,
) -> ExactResult:
    """Best region over all 25 early-fixed LPs."""
    per_assignment = []
    best_obj = None
    best_z = None
    for z in enumerate_assignments():
        obj = objective_for(params, table, z, config)
        per_assignment.append((z, obj))
        if obj is not None and (best_obj is None or obj > best_obj):
            best_obj = obj
            best_z = z
    if best_z is None:
        raise AllInfeasibleError(f"no feasible region for {params}")
    return ExactResult(
        best_objective=best_obj,
        best_assignment=best_z,
        per_assignment_objectives=per_assignment,
    )
