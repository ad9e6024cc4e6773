"""Dense two-phase primal simplex with Bland's anti-cycling rule.

Solves the maximization LPs produced by :mod:`gasliftopt.formulation`.
General box bounds are rewritten to nonnegative variables (shift, mirror, or
plus/minus split); equality rows get phase-1 artificials directly rather than
being split into inequality pairs.  Rows are scaled by their largest
coefficient so tolerances act on O(1) data.
"""

from dataclasses import dataclass

import numpy as np

from .formulation import EQ, GEQ, LEQ, LinearProgram, Solution

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_PIVOT_EPS = 1e-9


class IterationLimitError(RuntimeError):
    """Pivot budget exhausted before reaching a terminal status."""


@dataclass
class SimplexConfig:
    feasibility_tolerance: float = 1e-7
    pivot_rule: str = "bland"
    max_iterations: int = 10000

    def __post_init__(self):
        if self.feasibility_tolerance <= 0:
            raise ValueError("feasibility_tolerance must be positive")
        if self.max_iterations <= 0:
            raise ValueError("max_iterations must be positive")
        if self.pivot_rule != "bland":
            raise ValueError(f"unsupported pivot rule {self.pivot_rule!r}")


def solve(lp: LinearProgram, config: SimplexConfig | None = None) -> Solution:
    return SimplexSolver(config).solve(lp)


class SimplexSolver:
    """Single-use solver; keeps per-pivot objective values for inspection.

    ``phase1_objectives`` is nonincreasing (residual infeasibility being
    minimized) and ``phase2_objectives`` nondecreasing (true objective being
    maximized); both include the starting value.
    """

    def __init__(self, config: SimplexConfig | None = None):
        self.config = config or SimplexConfig()
        self.phase1_objectives: list[float] = []
        self.phase2_objectives: list[float] = []
        self._pivots = 0

    # -- bound handling -----------------------------------------------------

    def _to_standard_form(self, lp):
        """Rewrite onto variables y >= 0.

        Returns (A, senses, b, c, col_map, obj_const) or None when a bound
        pair is contradictory.  col_map holds one recovery rule per original
        variable: (kind, data...) with kind in fixed/shift/mirror/split.
        """
        A = np.asarray(lp.constraint_matrix, dtype=float)
        b = np.asarray(lp.rhs, dtype=float).copy()
        c_orig = np.asarray(lp.objective_coeffs, dtype=float)
        lb = np.asarray(lp.variable_lower_bounds, dtype=float)
        ub = np.asarray(lp.variable_upper_bounds, dtype=float)

        cols, ccoefs, col_map = [], [], []
        ub_rows = []  # (column, residual upper bound)
        obj_const = 0.0
        for i in range(lp.n_vars):
            lo, hi = lb[i], ub[i]
            if lo > hi:
                return None
            if lo == hi:
                b -= A[:, i] * lo
                obj_const += c_orig[i] * lo
                col_map.append(("fixed", lo))
            elif np.isfinite(lo):
                col_map.append(("shift", len(cols), lo))
                if lo != 0.0:
                    b -= A[:, i] * lo
                    obj_const += c_orig[i] * lo
                if np.isfinite(hi):
                    ub_rows.append((len(cols), hi - lo))
                cols.append(A[:, i])
                ccoefs.append(c_orig[i])
            elif np.isfinite(hi):
                # x = hi - y with y >= 0
                col_map.append(("mirror", len(cols), hi))
                b -= A[:, i] * hi
                obj_const += c_orig[i] * hi
                cols.append(-A[:, i])
                ccoefs.append(-c_orig[i])
            else:
                col_map.append(("split", len(cols), len(cols) + 1))
                cols.append(A[:, i])
                ccoefs.append(c_orig[i])
                cols.append(-A[:, i])
                ccoefs.append(-c_orig[i])

        n_std = len(cols)
        A_std = np.column_stack(cols) if n_std else np.zeros((lp.n_rows, 0))
        senses = list(lp.constraint_senses)
        b_std = b
        for col, resid in ub_rows:
            row = np.zeros(n_std)
            row[col] = 1.0
            A_std = np.vstack([A_std, row])
            senses.append(LEQ)
            b_std = np.append(b_std, resid)
        c_std = np.array(ccoefs)
        return A_std, senses, b_std, c_std, col_map, obj_const

    # -- tableau machinery ---------------------------------------------------
    #
    # The working tableau W stacks the m constraint rows on top of the
    # reduced-cost row, so one rank-1 update per pivot refreshes everything.
    # Bland's rule runs against a fixed variable order in which artificials
    # sort lowest: they are evicted first on ratio ties and, once nonbasic,
    # their columns are dropped from pricing, which keeps termination
    # guarantees while skipping most degenerate wandering.

    def _pivot(self, W, basis, r, j):
        piv_row = W[r] / W[r, j]
        col = W[:, j].copy()
        col[r] = 0.0
        W -= np.outer(col, piv_row)
        W[r] = piv_row
        basis[r] = j
        self._pivots += 1
        if self._pivots > self.config.max_iterations:
            raise IterationLimitError(
                f"exceeded {self.config.max_iterations} simplex pivots"
            )

    @staticmethod
    def _entering(zrow, allowed):
        """Lowest-order eligible column with an improving reduced cost."""
        neg = (zrow[:-1] < -_PIVOT_EPS) & allowed
        j = int(np.argmax(neg))
        return j if neg[j] else None

    @staticmethod
    def _leaving(W, basis, j, m, keys):
        """Min-ratio row; ties resolved to the lowest-order basic variable."""
        col = W[:m, j]
        ratios = np.full(m, np.inf)
        np.divide(np.maximum(W[:m, -1], 0.0), col, out=ratios, where=col > _PIVOT_EPS)
        rmin = ratios.min()
        if rmin == np.inf:
            return None
        ties = np.nonzero(ratios <= rmin + _PIVOT_EPS)[0]
        if ties.size == 1:
            return int(ties[0])
        return int(ties[np.argmin(keys[basis[ties]])])

    def _run_phase1(self, W, basis, keys, allowed):
        """Drive the artificial sum to zero; history tracks its current value."""
        m = W.shape[0] - 1
        self.phase1_objectives.append(-W[-1, -1])
        while True:
            j = self._entering(W[-1], allowed)
            if j is None:
                return OPTIMAL
            r = self._leaving(W, basis, j, m, keys)
            if r is None:
                return UNBOUNDED
            self._pivot(W, basis, r, j)
            self.phase1_objectives.append(-W[-1, -1])

    # -- main entry ----------------------------------------------------------

    def solve(self, lp: LinearProgram) -> Solution:
        tol = self.config.feasibility_tolerance
        std = self._to_standard_form(lp)
        if std is None:
            return Solution(status=INFEASIBLE)
        A, senses, b, c_std, col_map, obj_const = std

        # drop (or reject on) rows with no remaining coefficients
        keep = []
        for i in range(A.shape[0]):
            if np.abs(A[i]).max(initial=0.0) > 0.0:
                keep.append(i)
                continue
            resid = b[i]
            ok = (
                (senses[i] == LEQ and resid >= -tol)
                or (senses[i] == GEQ and resid <= tol)
                or (senses[i] == EQ and abs(resid) <= tol)
            )
            if not ok:
                return Solution(status=INFEASIBLE)
        A = A[keep]
        b = b[keep]
        senses = [senses[i] for i in keep]

        # equilibrate rows, then orient so every right-hand side is >= 0
        m, n = A.shape
        for i in range(m):
            scale = np.abs(A[i]).max()
            A[i] /= scale
            b[i] /= scale
        flip = b < 0
        A[flip] *= -1.0
        b[flip] *= -1.0
        senses = [
            {LEQ: GEQ, GEQ: LEQ, EQ: EQ}[s] if f else s
            for s, f in zip(senses, flip)
        ]

        # crash start: an equality row whose entire support on some column is
        # that single entry can take it as the initial basic variable
        crash = np.full(m, -1, dtype=int)
        col_nnz = (A != 0.0).sum(axis=0)
        for i, s in enumerate(senses):
            if s != EQ:
                continue
            for j in np.nonzero((A[i] != 0.0) & (col_nnz == 1))[0]:
                if A[i, j] < 0.0:
                    if b[i] != 0.0:
                        continue
                    A[i] *= -1.0
                if A[i, j] != 1.0:
                    b[i] /= A[i, j]
                    A[i] /= A[i, j]
                crash[i] = j
                break

        n_slack = sum(s == LEQ for s in senses)
        n_surplus = sum(s == GEQ for s in senses)
        n_art = sum(
            s in (EQ, GEQ) and crash[i] < 0 for i, s in enumerate(senses)
        )
        art_start = n + n_slack + n_surplus
        total = art_start + n_art

        W = np.zeros((m + 1, total + 1))
        W[:m, :n] = A
        W[:m, -1] = b
        basis = np.zeros(m, dtype=int)
        si = ti = ai = 0
        for i, s in enumerate(senses):
            if s == LEQ:
                W[i, n + si] = 1.0
                basis[i] = n + si
                si += 1
                continue
            if s == GEQ:
                W[i, n + n_slack + ti] = -1.0
                ti += 1
            if crash[i] >= 0:
                basis[i] = crash[i]
            else:
                W[i, art_start + ai] = 1.0
                basis[i] = art_start + ai
                ai += 1

        # phase 1: minimize the sum of artificials
        W[-1, art_start:total] = 1.0
        for i in range(m):
            if basis[i] >= art_start:
                W[-1] -= W[i]
        keys = np.arange(total)
        keys[:art_start] += total  # artificials sort lowest, leave basis first
        allowed = np.zeros(total, dtype=bool)
        allowed[:art_start] = True  # artificials never (re-)enter
        status = self._run_phase1(W, basis, keys, allowed)
        if status != OPTIMAL or -W[-1, -1] > tol:
            return Solution(status=INFEASIBLE)

        # pivot leftover artificials out; a row with no structural pivot is redundant
        drop_rows = []
        for i in range(m):
            if basis[i] < art_start:
                continue
            row_cols = np.nonzero(np.abs(W[i, :art_start]) > _PIVOT_EPS)[0]
            if row_cols.size:
                self._pivot(W, basis, i, int(row_cols[0]))
            else:
                drop_rows.append(i)
        if drop_rows:
            W = np.delete(W, drop_rows, axis=0)
            basis = np.delete(basis, drop_rows)
            m = W.shape[0] - 1

        # phase 2: minimize -c (i.e. maximize the true objective)
        W = np.ascontiguousarray(np.hstack([W[:, :art_start], W[:, -1:]]))
        c_min = np.zeros(art_start)
        c_min[:n] = -c_std
        W[-1, :art_start] = c_min
        W[-1, -1] = 0.0
        for i in range(m):
            cb = c_min[basis[i]]
            if cb != 0.0:
                W[-1] -= cb * W[i]
        status = self._run_phase2(W, basis, obj_const)
        if status != OPTIMAL:
            return Solution(status=UNBOUNDED)

        y = np.zeros(art_start)
        y[basis] = W[:m, -1]
        x = np.empty(lp.n_vars)
        for i, rule in enumerate(col_map):
            kind = rule[0]
            if kind == "fixed":
                x[i] = rule[1]
            elif kind == "shift":
                x[i] = y[rule[1]] + rule[2]
            elif kind == "mirror":
                x[i] = rule[2] - y[rule[1]]
            else:
                x[i] = y[rule[1]] - y[rule[2]]

        objective = float(lp.objective_coeffs @ x)
        self._verify(lp, x)
        return Solution(status=OPTIMAL, objective=objective, primal_values=x)

    def _run_phase2(self, W, basis, obj_const):
        """Maximize the true objective; W[-1, -1] carries its current value."""
        m = W.shape[0] - 1
        n_cols = W.shape[1] - 1
        keys = np.arange(n_cols)
        allowed = np.ones(n_cols, dtype=bool)
        self.phase2_objectives.append(W[-1, -1] + obj_const)
        while True:
            j = self._entering(W[-1], allowed)
            if j is None:
                return OPTIMAL
            r = self._leaving(W, basis, j, m, keys)
            if r is None:
                return UNBOUNDED
            self._pivot(W, basis, r, j)
            self.phase2_objectives.append(W[-1, -1] + obj_const)

    def _verify(self, lp, x):
        """Residual check on the original rows and bounds before reporting optimal."""
        tol = self.config.feasibility_tolerance
        lhs = lp.constraint_matrix @ x
        for i, s in enumerate(lp.constraint_senses):
            resid = lhs[i] - lp.rhs[i]
            scale = 1.0 + abs(lp.rhs[i])
            if s == LEQ and resid > tol * scale:
                raise RuntimeError(f"row {i} violated by {resid}")
            if s == GEQ and resid < -tol * scale:
                raise RuntimeError(f"row {i} violated by {-resid}")
            if s == EQ and abs(resid) > tol * scale:
                raise RuntimeError(f"row {i} violated by {abs(resid)}")
        lo_bad = x < lp.variable_lower_bounds - tol
        hi_bad = x > lp.variable_upper_bounds + tol
        if lo_bad.any() or hi_bad.any():
            raise RuntimeError("variable bound violated in reported solution")
