"""Minimal feed-forward network stack on numpy.

Dense layers with ReLU, two output heads (a pair of 5-way softmaxes for
region selection, or a single scaled scalar for objective regression),
inverted dropout, min-max input normalization, analytic reverse-mode
gradients, and Adam.  Everything here works on single vectors or on
(batch, features) arrays.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .formulation import N_INTERVALS, RegionAssignment

TWO_SOFTMAX5 = "two_softmax5"
SCALAR_SCALED = "scalar_scaled"

_CLIP = 1e-12  # probability clamp for cross-entropy logs


@dataclass(frozen=True)
class HeadSpec:
    kind: str
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in (TWO_SOFTMAX5, SCALAR_SCALED):
            raise ValueError(f"unknown head kind {self.kind!r}")


@dataclass(frozen=True)
class Normalizer:
    """Per-feature map x -> (clip(x) - offset) / scale, into [0, 1] on the fitted box."""

    offset: np.ndarray
    scale: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        clipped = np.clip(x, self.offset, self.offset + self.scale)
        return (clipped - self.offset) / self.scale

    def grad_mask(self, x: np.ndarray) -> np.ndarray:
        """d(normalized)/dx, zero where the clip saturates."""
        inside = (x >= self.offset) & (x <= self.offset + self.scale)
        return inside / self.scale


@dataclass
class MlpModel:
    layer_sizes: list
    weights: list  # per layer, shape (n_out, n_in)
    biases: list  # per layer, shape (n_out,)
    activation_spec: list  # "relu" for hidden layers, "identity" for the last
    head_spec: HeadSpec
    input_normalizer: Normalizer
    dropout_prob: float = 0.0

    def __post_init__(self):
        sizes = self.layer_sizes
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[i + 1], sizes[i]) or b.shape != (sizes[i + 1],):
                raise ValueError(f"layer {i} shapes inconsistent with {sizes}")
        if not 0.0 <= self.dropout_prob < 1.0:
            raise ValueError("dropout_prob must be in [0, 1)")

    @property
    def n_inputs(self) -> int:
        return self.layer_sizes[0]


def init_mlp(
    layer_sizes,
    head_spec: HeadSpec,
    input_normalizer: Normalizer,
    rng: np.random.Generator,
    dropout_prob: float = 0.0,
) -> MlpModel:
    """Fresh model, weights and biases uniform in +-1/sqrt(fan_in)."""
    weights, biases = [], []
    for n_in, n_out in zip(layer_sizes, layer_sizes[1:]):
        bound = 1.0 / np.sqrt(n_in)
        weights.append(rng.uniform(-bound, bound, size=(n_out, n_in)))
        biases.append(rng.uniform(-bound, bound, size=n_out))
    acts = ["relu"] * (len(layer_sizes) - 2) + ["identity"]
    return MlpModel(
        layer_sizes=list(layer_sizes),
        weights=weights,
        biases=biases,
        activation_spec=acts,
        head_spec=head_spec,
        input_normalizer=input_normalizer,
        dropout_prob=dropout_prob,
    )


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def forward(
    model: MlpModel,
    x,
    training: bool = False,
    rng: np.random.Generator | None = None,
):
    """Run the network; returns (output, cache) with cache feeding backward().

    Dropout masks are drawn from ``rng`` only when ``training`` is set and the
    model has a nonzero dropout probability.
    """
    x_arr = np.asarray(x, dtype=float)
    single = x_arr.ndim == 1
    xb = np.atleast_2d(x_arr)
    if xb.shape[1] != model.n_inputs:
        raise ValueError(f"expected {model.n_inputs} features, got {xb.shape[1]}")

    norm = model.input_normalizer
    a = norm.apply(xb)
    cache = {"x_raw": xb, "activations": [a], "preacts": [], "masks": []}

    n_layers = len(model.weights)
    use_dropout = training and model.dropout_prob > 0.0
    if use_dropout and rng is None:
        raise ValueError("training-mode dropout requires an rng")
    for l, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ w.T + b
        cache["preacts"].append(z)
        if l < n_layers - 1:
            a = np.maximum(z, 0.0)
            if use_dropout:
                keep = rng.random(a.shape) >= model.dropout_prob
                a = a * keep / (1.0 - model.dropout_prob)
                cache["masks"].append(keep)
            else:
                cache["masks"].append(None)
        else:
            a = z
        cache["activations"].append(a)

    head = model.head_spec
    if head.kind == TWO_SOFTMAX5:
        if a.shape[1] != 2 * N_INTERVALS:
            raise ValueError("two-softmax head needs a 10-wide final layer")
        gl = _softmax(a[:, :N_INTERVALS])
        whp = _softmax(a[:, N_INTERVALS:])
        out = np.concatenate([gl, whp], axis=1)
    else:
        out = a * head.scale
    cache["head_out"] = out
    return (out[0] if single else out), cache


def backward(model: MlpModel, cache: dict, grad_out):
    """Gradients of a scalar loss given d(loss)/d(output), summed over the batch.

    Returns (param_grads, grad_input): param_grads is [(dW, db), ...] per
    layer, grad_input has the shape of the raw input batch.
    """
    g = np.atleast_2d(np.asarray(grad_out, dtype=float))
    head = model.head_spec
    if head.kind == TWO_SOFTMAX5:
        out = cache["head_out"]
        parts = []
        for sl in (slice(0, N_INTERVALS), slice(N_INTERVALS, 2 * N_INTERVALS)):
            s, gh = out[:, sl], g[:, sl]
            inner = (gh * s).sum(axis=1, keepdims=True)
            parts.append(s * (gh - inner))
        dz = np.concatenate(parts, axis=1)
    else:
        dz = g * head.scale

    n_layers = len(model.weights)
    param_grads = [None] * n_layers
    for l in range(n_layers - 1, -1, -1):
        a_prev = cache["activations"][l]
        param_grads[l] = (dz.T @ a_prev, dz.sum(axis=0))
        da = dz @ model.weights[l]
        if l > 0:
            mask = cache["masks"][l - 1]
            if mask is not None:
                da = da * mask / (1.0 - model.dropout_prob)
            dz = da * (cache["preacts"][l - 1] > 0.0)
        else:
            dz = da
    grad_input = dz * model.input_normalizer.grad_mask(cache["x_raw"])
    return param_grads, grad_input


# -- losses -------------------------------------------------------------------------


def loss_bce_two_heads(pred, target: RegionAssignment) -> float:
    """Summed binary cross-entropy of both 5-way heads against one-hot targets."""
    p = np.asarray(pred, dtype=float)
    loss, _ = bce_two_heads_batch(p[None, :], target.to_binary()[None, :])
    return float(loss[0])


def bce_two_heads_batch(pred: np.ndarray, target_onehot: np.ndarray):
    """Per-sample BCE losses and d(loss)/d(pred) for a (batch, 10) block."""
    p = np.clip(pred, _CLIP, 1.0 - _CLIP)
    t = target_onehot
    losses = -(t * np.log(p) + (1.0 - t) * np.log1p(-p)).sum(axis=1)
    grad = (-t / p + (1.0 - t) / (1.0 - p))
    return losses, grad


def loss_squared(pred: float, target: float) -> float:
    return float((pred - target) ** 2)


def squared_loss_batch(pred: np.ndarray, target: np.ndarray):
    """Per-sample squared errors and d(loss)/d(pred)."""
    diff = pred - target
    return diff**2, 2.0 * diff


# -- optimizer ----------------------------------------------------------------------


@dataclass
class AdamState:
    step_count: int
    first_moment: list
    second_moment: list
    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8


def adam_init(params, learning_rate: float) -> AdamState:
    return AdamState(
        step_count=0,
        first_moment=[np.zeros_like(p) for p in params],
        second_moment=[np.zeros_like(p) for p in params],
        learning_rate=learning_rate,
    )


def adam_step(state: AdamState, params, grads):
    """One bias-corrected Adam update; returns (new_params, new_state)."""
    t = state.step_count + 1
    b1, b2 = state.beta1, state.beta2
    new_m, new_v, new_p = [], [], []
    for p, g, m, v in zip(params, grads, state.first_moment, state.second_moment):
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * g * g
        m_hat = m / (1.0 - b1**t)
        v_hat = v / (1.0 - b2**t)
        new_m.append(m)
        new_v.append(v)
        new_p.append(p - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon))
    new_state = AdamState(
        step_count=t,
        first_moment=new_m,
        second_moment=new_v,
        learning_rate=state.learning_rate,
        beta1=b1,
        beta2=b2,
        epsilon=state.epsilon,
    )
    return new_p, new_state


def model_params(model: MlpModel) -> list:
    """Flat parameter list [W0, b0, W1, b1, ...] referencing the model arrays."""
    out = []
    for w, b in zip(model.weights, model.biases):
        out.append(w)
        out.append(b)
    return out


def set_model_params(model: MlpModel, params) -> None:
    for l in range(len(model.weights)):
        model.weights[l] = params[2 * l]
        model.biases[l] = params[2 * l + 1]


# -- region decoding ----------------------------------------------------------------


def round_assignment(pred) -> RegionAssignment:
    """Argmax of each head; ties fall to the lower index."""
    p = np.asarray(pred, dtype=float)
    if p.shape != (2 * N_INTERVALS,):
        raise ValueError(f"expected a {2 * N_INTERVALS}-vector, got shape {p.shape}")
    return RegionAssignment(
        zgl_idx=int(np.argmax(p[:N_INTERVALS])),
        zwhp_idx=int(np.argmax(p[N_INTERVALS:])),
    )


# -- serialization ------------------------------------------------------------------


def model_to_json(model: MlpModel) -> str:
    layers = []
    for w, b in zip(model.weights, model.biases):
        layers.append(
            {
                "shape": list(w.shape),
                "weights": [float(v) for v in w.ravel()],
                "biases": [float(v) for v in b],
            }
        )
    return json.dumps(
        {
            "layer_sizes": model.layer_sizes,
            "layers": layers,
            "activation_spec": model.activation_spec,
            "head_spec": {"kind": model.head_spec.kind, "scale": model.head_spec.scale},
            "input_normalizer": {
                "offset": [float(v) for v in model.input_normalizer.offset],
                "scale": [float(v) for v in model.input_normalizer.scale],
            },
            "dropout_prob": model.dropout_prob,
        }
    )


def model_from_json(text: str) -> MlpModel:
    obj = json.loads(text)
    weights, biases = [], []
    for layer in obj["layers"]:
        shape = tuple(layer["shape"])
        weights.append(np.array(layer["weights"], dtype=float).reshape(shape))
        biases.append(np.array(layer["biases"], dtype=float))
    return MlpModel(
        layer_sizes=list(obj["layer_sizes"]),
        weights=weights,
        biases=biases,
        activation_spec=list(obj["activation_spec"]),
        head_spec=HeadSpec(**obj["head_spec"]),
        input_normalizer=Normalizer(
            offset=np.array(obj["input_normalizer"]["offset"], dtype=float),
            scale=np.array(obj["input_normalizer"]["scale"], dtype=float),
        ),
        dropout_prob=float(obj["dropout_prob"]),
    )


def save_model(model: MlpModel, path) -> None:
    with open(path, "w") as fh:
        fh.write(model_to_json(model))


def load_model(path) -> MlpModel:
    with open(path) as fh:
        return model_from_json(fh.read())
