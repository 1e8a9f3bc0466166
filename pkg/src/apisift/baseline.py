"""Signature-feature baseline classifier.

Extracts a fixed-width boolean feature vector from method headers only
(name prefix, return-type class, parameter shape, modifiers, class-name
keywords) and trains a one-vs-rest logistic regression over the three
labels.  The features never look at the method body, which is the whole
point: a corpus whose labels live in the body defeats this model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import MethodRecord
from .errors import ConfigError, LengthMismatch, ShapeError
from .evalkit import LABELS

NAME_PREFIXES = (
    "get",
    "set",
    "put",
    "send",
    "write",
    "read",
    "open",
    "close",
    "is",
    "has",
    "update",
    "query",
)
RETURN_CLASSES = ("void", "primitive", "string", "array", "object")
PARAM_BUCKETS = ("params0", "params1", "params2", "params3plus")
PARAM_TYPE_FLAGS = ("param_string", "param_object", "param_primitive_array")
MODIFIER_FLAGS = ("static", "final", "native")
CLASS_KEYWORDS = ("manager", "service", "telephony", "location", "sms", "net")

FEATURE_NAMES: tuple[str, ...] = (
    tuple(f"prefix_{p}" for p in NAME_PREFIXES)
    + tuple(f"return_{c}" for c in RETURN_CLASSES)
    + PARAM_BUCKETS
    + PARAM_TYPE_FLAGS
    + tuple(f"modifier_{m}" for m in MODIFIER_FLAGS)
    + tuple(f"class_{k}" for k in CLASS_KEYWORDS)
)
N_FEATURES = len(FEATURE_NAMES)

_PRIMITIVES = {"boolean", "byte", "short", "int", "long", "char", "float", "double"}
_STRING_TYPES = {"String", "java.lang.String", "CharSequence", "java.lang.CharSequence"}


def _base_type(type_name: str) -> str:
    """Type name with generic arguments removed (arrays kept)."""
    angle = type_name.find("<")
    if angle < 0:
        return type_name
    suffix = ""
    depth = 0
    for i in range(angle, len(type_name)):
        ch = type_name[i]
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
            if depth == 0:
                suffix = type_name[i + 1 :]
                break
    return type_name[:angle] + suffix


def _return_class(return_type: str) -> str:
    base = _base_type(return_type)
    if base.endswith("[]"):
        return "array"
    if base == "void":
        return "void"
    if base in _PRIMITIVES:
        return "primitive"
    if base in _STRING_TYPES:
        return "string"
    return "object"


def extract_signature_features(record: MethodRecord) -> np.ndarray:
    """Fixed-width 0/1 vector from header fields only; never reads the body."""
    values = np.zeros(N_FEATURES, dtype=np.float64)
    index = {name: i for i, name in enumerate(FEATURE_NAMES)}

    lowered = record.name.lower()
    for prefix in NAME_PREFIXES:
        if lowered.startswith(prefix):
            values[index[f"prefix_{prefix}"]] = 1.0

    values[index[f"return_{_return_class(record.return_type)}"]] = 1.0

    bucket = min(len(record.params), 3)
    values[index[PARAM_BUCKETS[bucket]]] = 1.0

    for param in record.params:
        base = _base_type(param)
        if base.endswith("[]"):
            if base[:-2] in _PRIMITIVES:
                values[index["param_primitive_array"]] = 1.0
            else:
                values[index["param_object"]] = 1.0
        elif base in _STRING_TYPES:
            values[index["param_string"]] = 1.0
        elif base not in _PRIMITIVES:
            values[index["param_object"]] = 1.0

    for modifier in MODIFIER_FLAGS:
        if modifier in record.modifiers:
            values[index[f"modifier_{modifier}"]] = 1.0

    class_lower = record.fqcn.lower()
    for keyword in CLASS_KEYWORDS:
        if keyword in class_lower:
            values[index[f"class_{keyword}"]] = 1.0

    return values


def features_for_records(records: list[MethodRecord]) -> np.ndarray:
    """Stack per-record feature vectors into an (n, width) matrix."""
    if not records:
        return np.zeros((0, N_FEATURES), dtype=np.float64)
    return np.stack([extract_signature_features(r) for r in records])


@dataclass
class BaselineConfig:
    """Full-batch gradient descent settings for the convex objective."""

    learning_rate: float = 0.5
    epochs: int = 300

    def __post_init__(self) -> None:
        if self.learning_rate < 0:
            raise ConfigError(f"learning rate must be >= 0, got {self.learning_rate}")
        if self.epochs < 0:
            raise ConfigError(f"epochs must be >= 0, got {self.epochs}")


@dataclass
class BaselineModel:
    """One-vs-rest logistic regression: one weight row per label."""

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weights.shape != (len(LABELS), N_FEATURES):
            raise ShapeError(
                f"weights must be {(len(LABELS), N_FEATURES)}, got {self.weights.shape}"
            )
        if self.bias.shape != (len(LABELS),):
            raise ShapeError(f"bias must be ({len(LABELS)},), got {self.bias.shape}")


def _check_training_inputs(features: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if features.ndim != 2 or features.shape[1] != N_FEATURES:
        raise ShapeError(f"features must be (n, {N_FEATURES}), got {features.shape}")
    if labels.ndim != 1:
        raise ShapeError(f"labels must be 1-D, got shape {labels.shape}")
    if features.shape[0] != labels.shape[0]:
        raise LengthMismatch(
            f"{features.shape[0]} feature rows vs {labels.shape[0]} labels"
        )
    if features.shape[0] == 0:
        raise ConfigError("cannot train on an empty dataset")
    if labels.min() < 0 or labels.max() >= len(LABELS):
        raise ConfigError(f"labels must lie in [0, {len(LABELS)}), got range "
                          f"[{labels.min()}, {labels.max()}]")
    return features, labels


def _sigmoid(scores: np.ndarray) -> np.ndarray:
    out = np.empty_like(scores)
    pos = scores >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-scores[pos]))
    ez = np.exp(scores[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def baseline_loss(model: BaselineModel, features: np.ndarray, labels: np.ndarray) -> float:
    """Mean one-vs-rest binary cross-entropy across the three labels."""
    features, labels = _check_training_inputs(features, labels)
    scores = features @ model.weights.T + model.bias
    targets = np.zeros_like(scores)
    targets[np.arange(labels.shape[0]), labels] = 1.0
    # log(1+exp(-|s|)) formulation is stable for large |score|
    per_entry = np.maximum(scores, 0.0) - scores * targets + np.log1p(np.exp(-np.abs(scores)))
    return float(per_entry.mean())


def train_baseline(
    features: np.ndarray, labels: np.ndarray, cfg: BaselineConfig | None = None
) -> BaselineModel:
    """Deterministic full-batch descent from zero initialization."""
    if cfg is None:
        cfg = BaselineConfig()
    features, labels = _check_training_inputs(features, labels)
    n = features.shape[0]
    weights = np.zeros((len(LABELS), N_FEATURES), dtype=np.float64)
    bias = np.zeros(len(LABELS), dtype=np.float64)
    targets = np.zeros((n, len(LABELS)), dtype=np.float64)
    targets[np.arange(n), labels] = 1.0
    for _ in range(cfg.epochs):
        scores = features @ weights.T + bias
        delta = (_sigmoid(scores) - targets) / n
        weights -= cfg.learning_rate * (delta.T @ features)
        bias -= cfg.learning_rate * delta.sum(axis=0)
    return BaselineModel(weights=weights, bias=bias)


def predict_baseline(model: BaselineModel, features: np.ndarray) -> tuple[str, np.ndarray]:
    """Label plus softmax probabilities over the three one-vs-rest scores."""
    features = np.asarray(features, dtype=np.float64)
    if features.shape != (N_FEATURES,):
        raise ShapeError(f"expected a ({N_FEATURES},) vector, got {features.shape}")
    scores = model.weights @ features + model.bias
    shifted = np.exp(scores - scores.max())
    probs = shifted / shifted.sum()
    return LABELS[int(np.argmax(probs))], probs


def predict_baseline_batch(model: BaselineModel, features: np.ndarray) -> np.ndarray:
    """Argmax label indices for an (n, width) feature matrix."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != N_FEATURES:
        raise ShapeError(f"features must be (n, {N_FEATURES}), got {features.shape}")
    scores = features @ model.weights.T + model.bias
    return np.argmax(scores, axis=1).astype(np.int64)


SCHEMA_VERSION = 1


def baseline_to_doc(model: BaselineModel) -> dict:
    """JSON-ready checkpoint document."""
    return {
        "schemaVersion": SCHEMA_VERSION,
        "kind": "baseline",
        "featureNames": list(FEATURE_NAMES),
        "weights": model.weights.tolist(),
        "bias": model.bias.tolist(),
    }


def baseline_from_doc(doc: dict) -> BaselineModel:
    """Inverse of baseline_to_doc; validates schema and feature list."""
    from .errors import FormatError

    if doc.get("schemaVersion") != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema version {doc.get('schemaVersion')!r}")
    if doc.get("kind") != "baseline":
        raise FormatError(f"expected a baseline checkpoint, got {doc.get('kind')!r}")
    if tuple(doc.get("featureNames", ())) != FEATURE_NAMES:
        raise FormatError("feature list in checkpoint does not match this build")
    return BaselineModel(
        weights=np.array(doc["weights"], dtype=np.float64),
        bias=np.array(doc["bias"], dtype=np.float64),
    )
