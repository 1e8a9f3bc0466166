"""Minimal dense-network substrate.

Forward/backward passes, softmax cross-entropy, SGD and Adam, plus a
finite-difference gradient checker.  Everything runs in float64: the
gradient-check contract (1e-4 relative error against central differences
at eps = 1e-5) leaves no room for single-precision storage.

Arrays are batch-first: inputs are (n, dim), weights are (out, in).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ShapeError

ACTIVATIONS = ("relu", "tanh", "identity")


@dataclass
class DenseLayer:
    weights: np.ndarray  # (out, in)
    bias: np.ndarray  # (out,)
    activation: str

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ConfigError(f"unknown activation {self.activation!r}")
        if self.weights.ndim != 2 or self.bias.ndim != 1:
            raise ShapeError("weights must be 2-D and bias 1-D")
        if self.weights.shape[0] != self.bias.shape[0]:
            raise ShapeError(
                f"bias length {self.bias.shape[0]} != output dim {self.weights.shape[0]}"
            )

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]


def init_dense(
    rng: np.random.Generator, in_dim: int, out_dim: int, activation: str
) -> DenseLayer:
    """He-style uniform initialization scaled by fan-in; zero bias."""
    limit = np.sqrt(6.0 / in_dim)
    weights = rng.uniform(-limit, limit, size=(out_dim, in_dim))
    return DenseLayer(weights, np.zeros(out_dim), activation)


def _activate(z: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return np.maximum(z, 0.0)
    if activation == "tanh":
        return np.tanh(z)
    return z


def _activation_grad(a: np.ndarray, activation: str) -> np.ndarray:
    """Derivative expressed through the activation output."""
    if activation == "relu":
        return (a > 0.0).astype(a.dtype)
    if activation == "tanh":
        return 1.0 - a * a
    return np.ones_like(a)


def forward(layers: list[DenseLayer], x: np.ndarray) -> list[np.ndarray]:
    """Run the affine+activation chain; returns [input, a1, ..., aL]."""
    if x.ndim != 2:
        raise ShapeError(f"input must be (batch, dim), got shape {x.shape}")
    if layers and x.shape[1] != layers[0].in_dim:
        raise ShapeError(f"input dim {x.shape[1]} != layer in-dim {layers[0].in_dim}")
    activations = [x]
    current = x
    for layer in layers:
        if current.shape[1] != layer.in_dim:
            raise ShapeError(
                f"activation dim {current.shape[1]} != layer in-dim {layer.in_dim}"
            )
        z = current @ layer.weights.T + layer.bias
        current = _activate(z, layer.activation)
        activations.append(current)
    return activations


def softmax(logits: np.ndarray) -> np.ndarray:
    """Stable softmax along the last axis."""
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=-1, keepdims=True)


def softmax_cross_entropy(logits: np.ndarray, true_class: int) -> tuple[float, np.ndarray]:
    """Loss and probabilities for a single logit vector."""
    if not 0 <= true_class < logits.shape[-1]:
        raise IndexError(f"class {true_class} out of range for {logits.shape[-1]} logits")
    shifted = logits - np.max(logits)
    log_z = np.log(np.sum(np.exp(shifted)))
    probs = np.exp(shifted - log_z)
    loss = float(log_z - shifted[true_class])
    return loss, probs


def softmax_cross_entropy_batch(
    logits: np.ndarray, classes: np.ndarray
) -> tuple[float, np.ndarray]:
    """Mean loss and per-row probabilities for a batch."""
    if logits.ndim != 2 or classes.shape[0] != logits.shape[0]:
        raise ShapeError("logits must be (n, k) with one class per row")
    if classes.size and (classes.min() < 0 or classes.max() >= logits.shape[1]):
        raise IndexError("class index out of range")
    shifted = logits - np.max(logits, axis=1, keepdims=True)
    log_z = np.log(np.sum(np.exp(shifted), axis=1))
    rows = np.arange(logits.shape[0])
    losses = log_z - shifted[rows, classes]
    probs = np.exp(shifted - log_z[:, None])
    return float(np.mean(losses)), probs


def cross_entropy_grad(probs: np.ndarray, classes: np.ndarray) -> np.ndarray:
    """d(mean loss)/d(logits) for softmax cross-entropy."""
    grad = probs.copy()
    rows = np.arange(probs.shape[0])
    grad[rows, classes] -= 1.0
    return grad / probs.shape[0]


@dataclass
class LayerGrads:
    d_weights: np.ndarray
    d_bias: np.ndarray


@dataclass
class Gradients:
    layers: list[LayerGrads]
    d_input: np.ndarray


def backward(
    layers: list[DenseLayer], activations: list[np.ndarray], loss_grad: np.ndarray
) -> Gradients:
    """Exact gradients given activations from a matching forward call."""
    if len(activations) != len(layers) + 1:
        raise ShapeError("activations do not match the layer stack")
    if loss_grad.shape != activations[-1].shape:
        raise ShapeError("loss gradient shape does not match the final activation")
    grads: list[LayerGrads] = [None] * len(layers)  # type: ignore[list-item]
    g = loss_grad
    for i in reversed(range(len(layers))):
        layer = layers[i]
        dz = g * _activation_grad(activations[i + 1], layer.activation)
        grads[i] = LayerGrads(dz.T @ activations[i], dz.sum(axis=0))
        g = dz @ layer.weights
    return Gradients(grads, g)


@dataclass
class TrainConfig:
    learning_rate: float = 0.01
    epochs: int = 10
    batch_size: int = 32
    seed: int = 0
    optimizer: str = "sgd"
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        # zero is legal (a no-op step); negative rates are rejected
        if self.learning_rate < 0:
            raise ConfigError(f"learning_rate must be >= 0, got {self.learning_rate}")
        if self.epochs < 0:
            raise ConfigError(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.optimizer not in ("sgd", "adam"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")


class Optimizer:
    """Parameter updater over a fixed list of arrays (updated in place)."""

    def __init__(self, cfg: TrainConfig):
        self.cfg = cfg
        self.step_count = 0
        self._m: list[np.ndarray] | None = None
        self._v: list[np.ndarray] | None = None

    def apply(self, params: list[np.ndarray], grads: list[np.ndarray]):
        if len(params) != len(grads):
            raise ShapeError("parameter/gradient count mismatch")
        self.step_count += 1
        lr = self.cfg.learning_rate
        if self.cfg.optimizer == "sgd":
            for p, g in zip(params, grads):
                p -= lr * g
            return
        if self._m is None:
            self._m = [np.zeros_like(p) for p in params]
            self._v = [np.zeros_like(p) for p in params]
        b1, b2, eps = self.cfg.beta1, self.cfg.beta2, self.cfg.eps
        t = self.step_count
        for p, g, m, v in zip(params, grads, self._m, self._v):
            m *= b1
            m += (1 - b1) * g
            v *= b2
            v += (1 - b2) * g * g
            m_hat = m / (1 - b1**t)
            v_hat = v / (1 - b2**t)
            p -= lr * m_hat / (np.sqrt(v_hat) + eps)


def layer_params(layers: list[DenseLayer]) -> list[np.ndarray]:
    out = []
    for layer in layers:
        out.append(layer.weights)
        out.append(layer.bias)
    return out


def flat_grads(grads: Gradients) -> list[np.ndarray]:
    out = []
    for g in grads.layers:
        out.append(g.d_weights)
        out.append(g.d_bias)
    return out


def train_step(
    layers: list[DenseLayer],
    x: np.ndarray,
    classes: np.ndarray,
    opt: Optimizer,
) -> float:
    """One optimizer step on a batch; returns the pre-update mean loss."""
    activations = forward(layers, x)
    loss, probs = softmax_cross_entropy_batch(activations[-1], classes)
    grads = backward(layers, activations, cross_entropy_grad(probs, classes))
    opt.apply(layer_params(layers), flat_grads(grads))
    return loss


def batch_loss(layers: list[DenseLayer], x: np.ndarray, classes: np.ndarray) -> float:
    activations = forward(layers, x)
    loss, _ = softmax_cross_entropy_batch(activations[-1], classes)
    return loss


def gradient_check(
    layers: list[DenseLayer],
    x: np.ndarray,
    classes: np.ndarray,
    eps: float = 1e-5,
    max_coords_per_array: int = 25,
    rng: np.random.Generator | None = None,
) -> float:
    """Max relative error of analytic vs central-difference gradients.

    Large parameter arrays are sampled coordinate-wise; small ones are
    checked exhaustively.
    """
    activations = forward(layers, x)
    _, probs = softmax_cross_entropy_batch(activations[-1], classes)
    analytic = flat_grads(backward(layers, activations, cross_entropy_grad(probs, classes)))
    params = layer_params(layers)
    if rng is None:
        rng = np.random.default_rng(0)
    worst = 0.0
    for p, g in zip(params, analytic):
        size = p.size
        if size <= max_coords_per_array:
            coords = np.arange(size)
        else:
            coords = rng.choice(size, size=max_coords_per_array, replace=False)
        flat_p = p.reshape(-1)
        flat_g = g.reshape(-1)
        for c in coords:
            original = flat_p[c]
            flat_p[c] = original + eps
            up = batch_loss(layers, x, classes)
            flat_p[c] = original - eps
            down = batch_loss(layers, x, classes)
            flat_p[c] = original
            numeric = (up - down) / (2 * eps)
            denom = max(abs(numeric), abs(flat_g[c]), 1e-8)
            worst = max(worst, abs(numeric - flat_g[c]) / denom)
    return worst


# ---------------------------------------------------------------------------
# checkpoint documents (file writing lives in fileio)

SCHEMA_VERSION = 1


def layers_to_doc(layers: list[DenseLayer]) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "layers": [
            {
                "activation": layer.activation,
                "out": layer.out_dim,
                "in": layer.in_dim,
                "weights": [[float(v) for v in row] for row in layer.weights],
                "bias": [float(v) for v in layer.bias],
            }
            for layer in layers
        ],
    }


def layers_from_doc(doc: dict) -> list[DenseLayer]:
    from .errors import FormatError

    if doc.get("schema") != SCHEMA_VERSION:
        raise FormatError(f"unsupported checkpoint schema {doc.get('schema')!r}")
    layers = []
    for spec in doc["layers"]:
        weights = np.array(spec["weights"], dtype=np.float64)
        bias = np.array(spec["bias"], dtype=np.float64)
        if weights.shape != (spec["out"], spec["in"]):
            raise FormatError(
                f"weight matrix shape {weights.shape} != declared ({spec['out']}, {spec['in']})"
            )
        layers.append(DenseLayer(weights, bias, spec["activation"]))
    return layers
