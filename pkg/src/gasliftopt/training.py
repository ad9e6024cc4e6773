"""Dataset generation and the three training regimes.

Labeled data pairs instance parameters with the enumeration oracle's optimal
region; weak data pairs random regions with their early-fixed LP objective
(-1 when the region is infeasible).  Three trainers build on those: a
supervised region classifier, an objective-value surrogate regressor, and a
weakly-supervised classifier trained by ascending the frozen surrogate.
"""

import csv
import json
from dataclasses import dataclass, asdict

import numpy as np

from .exact import objective_for, solve_exact
from .formulation import N_INTERVALS, RegionAssignment, enumerate_assignments
from .neural import (
    SCALAR_SCALED,
    TWO_SOFTMAX5,
    HeadSpec,
    MlpModel,
    Normalizer,
    adam_init,
    adam_step,
    backward,
    bce_two_heads_batch,
    forward,
    init_mlp,
    model_params,
    round_assignment,
    set_model_params,
    squared_loss_batch,
)
from .well_model import (
    BSW_RANGE,
    GOR_RANGE,
    QGL_MAX_RANGE,
    BreakpointGrid,
    FlowTable,
    ProblemParams,
    build_flow_table,
    default_grid,
)

INFEASIBLE_OBJECTIVE = -1.0

PI_OFFSETS = np.array([BSW_RANGE[0], GOR_RANGE[0], QGL_MAX_RANGE[0]])
PI_SCALES = np.array(
    [
        BSW_RANGE[1] - BSW_RANGE[0],
        GOR_RANGE[1] - GOR_RANGE[0],
        QGL_MAX_RANGE[1] - QGL_MAX_RANGE[0],
    ]
)

FIXING_NET_SIZES = [3, 25, 25, 2 * N_INTERVALS]
SURROGATE_NET_SIZES = [3 + 2 * N_INTERVALS, 10, 10, 10, 1]
SURROGATE_OUTPUT_SCALE = 2000.0
# nonzero dropout traps the regressor in an all-positive mode that never
# learns the feasibility boundary of this well; keep it off by default
SURROGATE_DROPOUT = 0.0


@dataclass(frozen=True)
class SupRecord:
    params: ProblemParams
    z_star: RegionAssignment
    objective_star: float


@dataclass(frozen=True)
class WeakRecord:
    params: ProblemParams
    z_hat: RegionAssignment
    p: float  # early-fixed optimum, or -1.0 for an infeasible region


@dataclass
class TrainConfig:
    learning_rate: float
    batch_size: int
    epochs: int
    seed: int
    split_ratio: float = 0.8

    def __post_init__(self):
        if not 0.0 < self.split_ratio < 1.0:
            raise ValueError("split_ratio must be in (0, 1)")

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "TrainConfig":
        return cls(**json.loads(text))


def supervised_config(seed: int = 0) -> TrainConfig:
    return TrainConfig(learning_rate=0.001, batch_size=64, epochs=100, seed=seed)


def surrogate_config(seed: int = 0) -> TrainConfig:
    # 20 epochs leaves the regressor far from converged on this well
    return TrainConfig(learning_rate=0.001, batch_size=1024, epochs=200, seed=seed)


def weak_config(seed: int = 0) -> TrainConfig:
    return TrainConfig(learning_rate=0.01, batch_size=64, epochs=100, seed=seed)


@dataclass
class TrainResult:
    model: MlpModel
    history: list  # per-epoch mean loss (or mean surrogate score for ascent)


# -- sampling and datasets -----------------------------------------------------------


def sample_params(count: int, seed: int) -> list:
    """Random instances: bsw ~ U(0.5, 1), gor ~ N(100, 25) clamped to [0, 300],
    qgl_max ~ U(4000, 12500)."""
    if count <= 0:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    bsw = rng.uniform(*BSW_RANGE, size=count)
    gor = np.clip(rng.normal(100.0, 25.0, size=count), *GOR_RANGE)
    qgl_max = rng.uniform(*QGL_MAX_RANGE, size=count)
    return [ProblemParams(float(b), float(g), float(q)) for b, g, q in zip(bsw, gor, qgl_max)]


def build_dsup(params_list, grid: BreakpointGrid | None = None) -> list:
    """One optimally-labeled record per instance."""
    grid = grid or default_grid()
    records = []
    for params in params_list:
        table = build_flow_table(params, grid)
        result = solve_exact(params, table)
        records.append(
            SupRecord(
                params=params,
                z_star=result.best_assignment,
                objective_star=result.best_objective,
            )
        )
    return records


def build_dweak(
    params_list,
    candidates_per_instance: int = 12,
    seed: int = 0,
    grid: BreakpointGrid | None = None,
) -> list:
    """Random distinct regions per instance, labeled with their LP optimum
    (or -1 when the fixed LP is infeasible)."""
    assignments = enumerate_assignments()
    if not 0 < candidates_per_instance <= len(assignments):
        raise ValueError(f"candidates_per_instance must be in 1..{len(assignments)}")
    grid = grid or default_grid()
    rng = np.random.default_rng(seed)
    records = []
    for params in params_list:
        table = build_flow_table(params, grid)
        picks = rng.choice(len(assignments), size=candidates_per_instance, replace=False)
        for idx in picks:
            z = assignments[idx]
            obj = objective_for(params, table, z)
            p = INFEASIBLE_OBJECTIVE if obj is None else obj
            records.append(WeakRecord(params=params, z_hat=z, p=p))
    return records


def split_records(records, split_ratio: float, seed: int):
    """Deterministic shuffled split into (train, test); both sides nonempty."""
    n = len(records)
    n_train = min(max(int(round(n * split_ratio)), 1), n - 1)
    order = np.random.default_rng(seed).permutation(n)
    train = [records[i] for i in order[:n_train]]
    test = [records[i] for i in order[n_train:]]
    return train, test


# -- feature builders ----------------------------------------------------------------


def pi_normalizer() -> Normalizer:
    return Normalizer(offset=PI_OFFSETS.copy(), scale=PI_SCALES.copy())


def surrogate_normalizer() -> Normalizer:
    offset = np.concatenate([PI_OFFSETS, np.zeros(2 * N_INTERVALS)])
    scale = np.concatenate([PI_SCALES, np.ones(2 * N_INTERVALS)])
    return Normalizer(offset=offset, scale=scale)


def params_matrix(params_list) -> np.ndarray:
    return np.array([p.as_vector() for p in params_list])


def weak_features(records) -> np.ndarray:
    """(batch, 13) blocks: raw instance parameters followed by the region one-hot."""
    return np.array(
        [np.concatenate([r.params.as_vector(), r.z_hat.to_binary()]) for r in records]
    )


def new_fixing_net(rng: np.random.Generator) -> MlpModel:
    return init_mlp(FIXING_NET_SIZES, HeadSpec(TWO_SOFTMAX5), pi_normalizer(), rng)


def new_surrogate_net(rng: np.random.Generator) -> MlpModel:
    return init_mlp(
        SURROGATE_NET_SIZES,
        HeadSpec(SCALAR_SCALED, SURROGATE_OUTPUT_SCALE),
        surrogate_normalizer(),
        rng,
        dropout_prob=SURROGATE_DROPOUT,
    )


def _batches(n: int, batch_size: int, order: np.ndarray):
    for start in range(0, n, batch_size):
        yield order[start : start + batch_size]


# -- trainers ------------------------------------------------------------------------


def train_supervised(records, config: TrainConfig) -> TrainResult:
    """Fit the region classifier to optimal labels with two-head cross-entropy."""
    if not records:
        raise ValueError("empty training set")
    rng = np.random.default_rng(config.seed)
    model = new_fixing_net(rng)
    x = params_matrix([r.params for r in records])
    t = np.array([r.z_star.to_binary() for r in records])

    params = model_params(model)
    state = adam_init(params, config.learning_rate)
    history = []
    for _ in range(config.epochs):
        order = rng.permutation(len(x))
        total = 0.0
        for idx in _batches(len(x), config.batch_size, order):
            pred, cache = forward(model, x[idx], training=True, rng=rng)
            losses, dpred = bce_two_heads_batch(pred, t[idx])
            grads, _ = backward(model, cache, dpred / len(idx))
            params, state = adam_step(state, params, _flatten(grads))
            set_model_params(model, params)
            total += losses.sum()
        history.append(total / len(x))
    return TrainResult(model=model, history=history)


def train_surrogate(records, config: TrainConfig) -> TrainResult:
    """Fit the objective surrogate to (instance, region) -> value pairs."""
    if not records:
        raise ValueError("empty training set")
    rng = np.random.default_rng(config.seed)
    model = new_surrogate_net(rng)
    x = weak_features(records)
    t = np.array([r.p for r in records])

    params = model_params(model)
    state = adam_init(params, config.learning_rate)
    history = []
    for _ in range(config.epochs):
        order = rng.permutation(len(x))
        total = 0.0
        for idx in _batches(len(x), config.batch_size, order):
            pred, cache = forward(model, x[idx], training=True, rng=rng)
            pred = pred[:, 0]
            losses, dpred = squared_loss_batch(pred, t[idx])
            grads, _ = backward(model, cache, (dpred / len(idx))[:, None])
            params, state = adam_step(state, params, _flatten(grads))
            set_model_params(model, params)
            total += losses.sum()
        history.append(total / len(x))
    return TrainResult(model=model, history=history)


def train_weak(params_list, surrogate: MlpModel, config: TrainConfig) -> TrainResult:
    """Train the region classifier to maximize the frozen surrogate's score.

    The classifier's relaxed head outputs are fed to the surrogate in place
    of a one-hot region; gradients flow through the surrogate's input and
    update only the classifier.
    """
    if not params_list:
        raise ValueError("empty training set")
    rng = np.random.default_rng(config.seed)
    model = new_fixing_net(rng)
    x = params_matrix(params_list)

    params = model_params(model)
    state = adam_init(params, config.learning_rate)
    history = []
    for _ in range(config.epochs):
        order = rng.permutation(len(x))
        total = 0.0
        for idx in _batches(len(x), config.batch_size, order):
            xb = x[idx]
            zhat, cache_fix = forward(model, xb, training=True, rng=rng)
            score, cache_sur = forward(surrogate, np.concatenate([xb, zhat], axis=1))
            # ascend the mean score: upstream gradient is -1/B per sample
            upstream = np.full((len(idx), 1), -1.0 / len(idx))
            _, grad_sur_in = backward(surrogate, cache_sur, upstream)
            grads, _ = backward(model, cache_fix, grad_sur_in[:, 3:])
            params, state = adam_step(state, params, _flatten(grads))
            set_model_params(model, params)
            total += score[:, 0].sum()
        history.append(total / len(x))
    return TrainResult(model=model, history=history)


def _flatten(param_grads):
    out = []
    for dw, db in param_grads:
        out.append(dw)
        out.append(db)
    return out


def baseline_assignment() -> RegionAssignment:
    """Constant fallback: the lowest gas-rate and lowest pressure region."""
    return RegionAssignment(0, 0)


def predict_assignment(model: MlpModel, params: ProblemParams) -> RegionAssignment:
    pred, _ = forward(model, params.as_vector())
    return round_assignment(pred)


# -- CSV interchange -----------------------------------------------------------------

DSUP_HEADER = ["bsw", "gor", "qgl_max", "zgl_idx", "zwhp_idx", "objective"]
DWEAK_HEADER = ["bsw", "gor", "qgl_max", "zgl_idx", "zwhp_idx", "p"]


def write_dsup_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DSUP_HEADER)
        for r in records:
            writer.writerow(
                [
                    repr(r.params.bsw),
                    repr(r.params.gor),
                    repr(r.params.qgl_max),
                    r.z_star.zgl_idx,
                    r.z_star.zwhp_idx,
                    repr(r.objective_star),
                ]
            )


def read_dsup_csv(path) -> list:
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != DSUP_HEADER:
            raise ValueError(f"unexpected header {header}")
        for row in reader:
            records.append(
                SupRecord(
                    params=ProblemParams(float(row[0]), float(row[1]), float(row[2])),
                    z_star=RegionAssignment(int(row[3]), int(row[4])),
                    objective_star=float(row[5]),
                )
            )
    return records


def write_dweak_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DWEAK_HEADER)
        for r in records:
            writer.writerow(
                [
                    repr(r.params.bsw),
                    repr(r.params.gor),
                    repr(r.params.qgl_max),
                    r.z_hat.zgl_idx,
                    r.z_hat.zwhp_idx,
                    repr(r.p),
                ]
            )


def read_dweak_csv(path) -> list:
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != DWEAK_HEADER:
            raise ValueError(f"unexpected header {header}")
        for row in reader:
            records.append(
                WeakRecord(
                    params=ProblemParams(float(row[0]), float(row[1]), float(row[2])),
                    z_hat=RegionAssignment(int(row[3]), int(row[4])),
                    p=float(row[5]),
                )
            )
    return records
