"""Independent reference implementations used to cross-check the package.

Nothing here may call into the code paths it checks: LP optima come from
exhaustive vertex enumeration, gradients from central finite differences.
"""

import itertools

import numpy as np

from gasliftopt.formulation import EQ, GEQ, LEQ, LinearProgram
from gasliftopt.neural import forward, model_params


def brute_force_lp_max(lp: LinearProgram):
    """Max objective over {x >= 0, rows satisfied} by enumerating basic points.

    Assumes every variable has bounds [0, inf).  Returns None when no
    candidate vertex is feasible.
    """
    c = lp.objective_coeffs
    A = lp.constraint_matrix
    b = lp.rhs
    m, n = A.shape
    planes = np.vstack([A, np.eye(n)])
    rhs_all = np.concatenate([b, np.zeros(n)])

    combos = np.array(list(itertools.combinations(range(m + n), n)))
    M = planes[combos]
    r = rhs_all[combos]
    keep = np.abs(np.linalg.det(M)) > 1e-10
    if not keep.any():
        return None
    X = np.linalg.solve(M[keep], r[keep][..., None])[..., 0]

    feas = (X >= -1e-8).all(axis=1)
    lhs = X @ A.T
    for i, sense in enumerate(lp.constraint_senses):
        slack = 1e-8 * (1.0 + abs(b[i]))
        if sense == LEQ:
            feas &= lhs[:, i] <= b[i] + slack
        elif sense == GEQ:
            feas &= lhs[:, i] >= b[i] - slack
        else:
            feas &= np.abs(lhs[:, i] - b[i]) <= slack
    if not feas.any():
        return None
    return float((X[feas] @ c).max())


def random_feasible_bounded_lp(rng: np.random.Generator, max_vars=8, max_rows=8):
    """Random dense LP that is feasible (interior witness) and bounded (cap row)."""
    n = int(rng.integers(2, max_vars + 1))
    m = int(rng.integers(1, max_rows))  # one more row (the cap) is added below
    A = rng.normal(size=(m, n))
    x0 = rng.uniform(0.1, 2.0, size=n)
    senses = []
    b = np.empty(m)
    for i in range(m):
        u = rng.random()
        margin = rng.uniform(0.1, 2.0)
        if u < 0.6:
            senses.append(LEQ)
            b[i] = A[i] @ x0 + margin
        elif u < 0.8:
            senses.append(GEQ)
            b[i] = A[i] @ x0 - margin
        else:
            senses.append(EQ)
            b[i] = A[i] @ x0
    A = np.vstack([A, np.ones(n)])
    senses.append(LEQ)
    b = np.append(b, x0.sum() + rng.uniform(1.0, 5.0))
    return LinearProgram(
        objective_coeffs=rng.normal(size=n),
        constraint_matrix=A,
        constraint_senses=senses,
        rhs=b,
        variable_lower_bounds=np.zeros(n),
        variable_upper_bounds=np.full(n, np.inf),
        variable_names=[f"x{j}" for j in range(n)],
    )


def finite_diff_param_grads(model, x, scalar_loss, h=1e-5):
    """Central-difference gradients of scalar_loss(output) wrt every parameter.

    scalar_loss maps the forward output (dropout off) to a float.
    """

    def evaluate():
        out, _ = forward(model, x, training=False)
        return scalar_loss(out)

    grads = []
    for arr in model_params(model):
        g = np.zeros_like(arr)
        flat = arr.ravel()
        gflat = g.ravel()
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            up = evaluate()
            flat[i] = orig - h
            down = evaluate()
            flat[i] = orig
            gflat[i] = (up - down) / (2.0 * h)
        grads.append(g)
    return grads


def max_relative_error(analytic, reference, floor=0.01):
    """Worst elementwise |a - r| / max(|a|, |r|, floor) over parameter lists."""
    worst = 0.0
    for a, r in zip(analytic, reference):
        denom = np.maximum(np.maximum(np.abs(a), np.abs(r)), floor)
        worst = max(worst, float((np.abs(a - r) / denom).max()))
    return worst


def away_from_relu_kinks(cache, margin=1e-3):
    """True when no hidden pre-activation sits within margin of zero."""
    pre = cache["preacts"][:-1]
    return all(np.abs(z).min(initial=np.inf) > margin for z in pre)
