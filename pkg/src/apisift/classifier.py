"""Dual-branch classifier over documentation and code vectors.

A documentation branch (768 in) and a code branch (384 in) each reduce
to 128 features through three ReLU layers; their concatenation feeds a
three-layer head ending in 3 logits (SOURCE, SINK, NEITHER).  This
module also owns the stratified fold protocol, cross-validation and
ablation harnesses, and the complementarity counts used to compare two
predictors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .docvec import DOC_DIM
from .codevec import CODE_DIM
from .errors import ConfigError, LengthMismatch, ShapeError
from .evalkit import (
    LABELS,
    ConfusionMatrix,
    MetricsReport,
    cohen_kappa,
    metrics,
)
from .nnet import (
    DenseLayer,
    Optimizer,
    TrainConfig,
    backward,
    cross_entropy_grad,
    forward,
    init_dense,
    layers_from_doc,
    layers_to_doc,
    softmax,
    softmax_cross_entropy_batch,
)

BRANCH_OUT = 128
CONCAT_DIM = 2 * BRANCH_OUT


@dataclass
class ModelConfig:
    doc_sizes: tuple[int, ...] = (DOC_DIM, 384, 192, BRANCH_OUT)
    code_sizes: tuple[int, ...] = (CODE_DIM, 256, 160, BRANCH_OUT)
    head_sizes: tuple[int, ...] = (CONCAT_DIM, 128, 64, 3)
    n_classes: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.n_classes not in (2, 3):
            raise ConfigError(f"n_classes must be 2 or 3, got {self.n_classes}")
        checks = [
            (self.doc_sizes[0], DOC_DIM, "doc branch input"),
            (self.doc_sizes[-1], BRANCH_OUT, "doc branch output"),
            (self.code_sizes[0], CODE_DIM, "code branch input"),
            (self.code_sizes[-1], BRANCH_OUT, "code branch output"),
            (self.head_sizes[0], CONCAT_DIM, "head input"),
            (self.head_sizes[-1], self.n_classes, "head output"),
        ]
        for got, want, what in checks:
            if got != want:
                raise ConfigError(f"{what} must be {want}, got {got}")
        for sizes, what in (
            (self.doc_sizes, "doc branch"),
            (self.code_sizes, "code branch"),
            (self.head_sizes, "head"),
        ):
            if len(sizes) < 2 or any(s < 1 for s in sizes):
                raise ConfigError(f"{what} sizes must be >= 1 with at least one layer")


@dataclass
class DualBranchModel:
    config: ModelConfig
    doc_layers: list[DenseLayer]
    code_layers: list[DenseLayer]
    head_layers: list[DenseLayer]

    def params(self) -> list[np.ndarray]:
        out = []
        for layer in self.doc_layers + self.code_layers + self.head_layers:
            out.append(layer.weights)
            out.append(layer.bias)
        return out


def build_model(config: ModelConfig | None = None, seed: int | None = None) -> DualBranchModel:
    """Seeded model with ReLU branches and an identity-logit head."""
    if config is None:
        config = ModelConfig()
    if seed is not None:
        config = ModelConfig(
            config.doc_sizes, config.code_sizes, config.head_sizes, config.n_classes, seed
        )
    rng = np.random.default_rng(config.seed)

    def stack(sizes, last_activation):
        layers = []
        for i in range(len(sizes) - 1):
            act = last_activation if i == len(sizes) - 2 else "relu"
            layers.append(init_dense(rng, sizes[i], sizes[i + 1], act))
        return layers

    return DualBranchModel(
        config=config,
        doc_layers=stack(config.doc_sizes, "relu"),
        code_layers=stack(config.code_sizes, "relu"),
        head_layers=stack(config.head_sizes, "identity"),
    )


def parameter_count(model: DualBranchModel) -> int:
    return sum(p.size for p in model.params())


# ---------------------------------------------------------------------------
# dataset


@dataclass
class Dataset:
    signatures: list[str]
    doc: np.ndarray  # (n, 768)
    code: np.ndarray  # (n, 384)
    labels: np.ndarray  # (n,) ints over LABELS order

    def __post_init__(self):
        n = len(self.signatures)
        if self.doc.shape != (n, DOC_DIM):
            raise ShapeError(f"doc vectors must be (n, {DOC_DIM}), got {self.doc.shape}")
        if self.code.shape != (n, CODE_DIM):
            raise ShapeError(f"code vectors must be (n, {CODE_DIM}), got {self.code.shape}")
        if self.labels.shape != (n,):
            raise ShapeError("labels must be one per example")
        if len(set(self.signatures)) != n:
            raise ConfigError("duplicate signatures in dataset")

    def __len__(self) -> int:
        return len(self.signatures)

    def class_counts(self) -> dict[str, int]:
        return {lab: int(np.sum(self.labels == i)) for i, lab in enumerate(LABELS)}


# ---------------------------------------------------------------------------
# prediction


def _forward_full(model: DualBranchModel, doc: np.ndarray, code: np.ndarray):
    acts_doc = forward(model.doc_layers, doc)
    acts_code = forward(model.code_layers, code)
    concat = np.concatenate([acts_doc[-1], acts_code[-1]], axis=1)
    acts_head = forward(model.head_layers, concat)
    return acts_doc, acts_code, acts_head


def predict_batch(
    model: DualBranchModel, doc: np.ndarray, code: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """(label indices, probabilities); argmax takes the first index on ties."""
    _, _, acts_head = _forward_full(model, doc, code)
    probs = softmax(acts_head[-1])
    return np.argmax(probs, axis=1), probs


def predict(model: DualBranchModel, doc_vec: np.ndarray, code_vec: np.ndarray) -> tuple[str, np.ndarray]:
    doc_vec = np.asarray(doc_vec, dtype=np.float64)
    code_vec = np.asarray(code_vec, dtype=np.float64)
    if doc_vec.shape != (DOC_DIM,):
        raise ShapeError(f"doc vector must have {DOC_DIM} values, got {doc_vec.shape}")
    if code_vec.shape != (CODE_DIM,):
        raise ShapeError(f"code vector must have {CODE_DIM} values, got {code_vec.shape}")
    idx, probs = predict_batch(model, doc_vec[None, :], code_vec[None, :])
    labels = LABELS if model.config.n_classes == 3 else LABELS[:2]
    return labels[int(idx[0])], probs[0]


# ---------------------------------------------------------------------------
# training


def train_model(
    model: DualBranchModel,
    doc: np.ndarray,
    code: np.ndarray,
    labels: np.ndarray,
    cfg: TrainConfig,
) -> list[float]:
    """Minibatch training; returns mean loss per epoch."""
    n = doc.shape[0]
    opt = Optimizer(cfg)
    params = model.params()
    rng = np.random.default_rng(cfg.seed)
    split = model.config.doc_sizes[-1]
    history = []
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            acts_doc, acts_code, acts_head = _forward_full(model, doc[idx], code[idx])
            loss, probs = softmax_cross_entropy_batch(acts_head[-1], labels[idx])
            g = cross_entropy_grad(probs, labels[idx])
            g_head = backward(model.head_layers, acts_head, g)
            g_doc = backward(model.doc_layers, acts_doc, g_head.d_input[:, :split])
            g_code = backward(model.code_layers, acts_code, g_head.d_input[:, split:])
            grads = []
            for part in (g_doc, g_code, g_head):
                for lg in part.layers:
                    grads.append(lg.d_weights)
                    grads.append(lg.d_bias)
            opt.apply(params, grads)
            total += loss * len(idx)
        history.append(total / n)
    return history


# ---------------------------------------------------------------------------
# stratified folds


@dataclass
class FoldPlan:
    k: int
    assignment: dict[str, int]
    seed: int


def stratified_kfold(dataset: Dataset, k: int, seed: int) -> FoldPlan:
    """Per-class counts across folds differ by at most one."""
    return _stratified_kfold_labels(dataset, k, seed, LABELS)


def fold_indices(dataset: Dataset, plan: FoldPlan, fold: int) -> tuple[np.ndarray, np.ndarray]:
    """(train indices, test indices) for one fold."""
    mask = np.array([plan.assignment[s] == fold for s in dataset.signatures])
    return np.flatnonzero(~mask), np.flatnonzero(mask)


# ---------------------------------------------------------------------------
# cross-validation and ablation


@dataclass
class CrossvalResult:
    fold_reports: list[MetricsReport]
    aggregate: MetricsReport
    predictions: dict[str, tuple[str, np.ndarray]]  # signature -> (label, probs)
    plan: FoldPlan


ABLATION_MODES = ("doc-only", "code-only", "both")


def _apply_mode(doc: np.ndarray, code: np.ndarray, mode: str) -> tuple[np.ndarray, np.ndarray]:
    if mode == "doc-only":
        return doc, np.zeros_like(code)
    if mode == "code-only":
        return np.zeros_like(doc), code
    if mode == "both":
        return doc, code
    raise ConfigError(f"unknown ablation mode {mode!r} (expected {ABLATION_MODES})")


def run_crossval(
    dataset: Dataset,
    k: int,
    train_cfg: TrainConfig,
    model_cfg: ModelConfig | None = None,
    mode: str = "both",
    target: str | None = None,
) -> CrossvalResult:
    """Train on k-1 folds, evaluate on the held-out fold, pool predictions.

    mode zeroes one branch's inputs ('doc-only'/'code-only'); target
    collapses the problem to target vs rest ('SOURCE' or 'SINK').
    """
    doc, code = _apply_mode(dataset.doc, dataset.code, mode)
    if target is None:
        labels = dataset.labels
        label_names: tuple[str, ...] = LABELS
        n_classes = 3
    else:
        if target not in LABELS[:2]:
            raise ConfigError(f"binary target must be SOURCE or SINK, got {target!r}")
        labels = (dataset.labels != LABELS.index(target)).astype(np.int64)
        label_names = (target, f"NOT_{target}")
        n_classes = 2

    fold_view = Dataset(dataset.signatures, dataset.doc, dataset.code, labels)
    plan = _stratified_kfold_labels(fold_view, k, train_cfg.seed, label_names)

    if model_cfg is None:
        model_cfg = ModelConfig(n_classes=n_classes, head_sizes=(CONCAT_DIM, 128, 64, n_classes))
    elif model_cfg.n_classes != n_classes:
        raise ConfigError("model n_classes does not match the requested target mode")

    fold_reports: list[MetricsReport] = []
    predictions: dict[str, tuple[str, np.ndarray]] = {}
    pooled_true: list[str] = []
    pooled_pred: list[str] = []
    for fold in range(k):
        train_idx, test_idx = fold_indices(dataset, plan, fold)
        fold_cfg = _with_seed(train_cfg, train_cfg.seed * 1000 + fold)
        model = build_model(model_cfg, seed=fold_cfg.seed)
        train_model(model, doc[train_idx], code[train_idx], labels[train_idx], fold_cfg)
        pred_idx, probs = predict_batch(model, doc[test_idx], code[test_idx])
        true_names = [label_names[labels[i]] for i in test_idx]
        pred_names = [label_names[int(p)] for p in pred_idx]
        pooled_true.extend(true_names)
        pooled_pred.extend(pred_names)
        for row, i in enumerate(test_idx):
            predictions[dataset.signatures[i]] = (pred_names[row], probs[row])
        cm = _confusion(true_names, pred_names, label_names)
        report = metrics(cm)
        report.kappa = cohen_kappa(true_names, pred_names)
        fold_reports.append(report)
    aggregate = metrics(_confusion(pooled_true, pooled_pred, label_names))
    aggregate.kappa = cohen_kappa(pooled_true, pooled_pred)
    return CrossvalResult(fold_reports, aggregate, predictions, plan)


def _confusion(true_names, pred_names, label_names) -> ConfusionMatrix:
    index = {lab: i for i, lab in enumerate(label_names)}
    counts = np.zeros((len(label_names), len(label_names)), dtype=np.int64)
    for t, p in zip(true_names, pred_names):
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(counts, tuple(label_names))


def _with_seed(cfg: TrainConfig, seed: int) -> TrainConfig:
    return TrainConfig(
        learning_rate=cfg.learning_rate,
        epochs=cfg.epochs,
        batch_size=cfg.batch_size,
        seed=seed,
        optimizer=cfg.optimizer,
        beta1=cfg.beta1,
        beta2=cfg.beta2,
        eps=cfg.eps,
    )


def _stratified_kfold_labels(dataset: Dataset, k: int, seed: int, label_names) -> FoldPlan:
    """Stratified folds over an arbitrary label alphabet (3-class or binary)."""
    if k < 2:
        raise ConfigError(f"k must be >= 2, got {k}")
    rng = np.random.default_rng(seed)
    assignment: dict[str, int] = {}
    for class_idx in range(len(label_names)):
        members = np.flatnonzero(dataset.labels == class_idx)
        if len(members) < k:
            raise ConfigError(
                f"class {label_names[class_idx]} has {len(members)} examples, fewer than k={k}"
            )
        members = members[rng.permutation(len(members))]
        # cyclic assignment keeps per-fold counts within one; rotating the
        # start by class index spreads remainders across different folds
        for i, m in enumerate(members):
            assignment[dataset.signatures[m]] = (i + class_idx) % k
    return FoldPlan(k, assignment, seed)


@dataclass
class AblationReport:
    mode: str
    target: str  # "all" for the 3-class setup
    result: CrossvalResult

    @property
    def summary(self) -> dict[str, float]:
        agg = self.result.aggregate
        return {
            "accuracy": agg.accuracy,
            "precision": agg.weighted_precision,
            "recall": agg.weighted_recall,
            "f1": agg.weighted_f1,
            "kappa": agg.kappa if agg.kappa is not None else float("nan"),
        }


def run_ablation(
    dataset: Dataset,
    mode: str,
    k: int,
    train_cfg: TrainConfig,
    target: str | None = None,
) -> AblationReport:
    if mode not in ABLATION_MODES:
        raise ConfigError(f"unknown ablation mode {mode!r} (expected {ABLATION_MODES})")
    result = run_crossval(dataset, k, train_cfg, mode=mode, target=target)
    return AblationReport(mode, target or "all", result)


# ---------------------------------------------------------------------------
# complementarity


def complementarity(
    preds_a: list[str], preds_b: list[str], truth: list[str], target_label: str
) -> tuple[int, int, int, int]:
    """Among target-label examples: correct by only A, only B, both, neither."""
    if not (len(preds_a) == len(preds_b) == len(truth)):
        raise LengthMismatch(
            f"prediction/truth lengths differ: {len(preds_a)}/{len(preds_b)}/{len(truth)}"
        )
    only_a = only_b = both = neither = 0
    for a, b, t in zip(preds_a, preds_b, truth):
        if t != target_label:
            continue
        a_ok = a == t
        b_ok = b == t
        if a_ok and b_ok:
            both += 1
        elif a_ok:
            only_a += 1
        elif b_ok:
            only_b += 1
        else:
            neither += 1
    return only_a, only_b, both, neither


# ---------------------------------------------------------------------------
# checkpoint document

SCHEMA_VERSION = 1


def model_to_doc(model: DualBranchModel) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "config": {
            "docSizes": list(model.config.doc_sizes),
            "codeSizes": list(model.config.code_sizes),
            "headSizes": list(model.config.head_sizes),
            "nClasses": model.config.n_classes,
            "seed": model.config.seed,
        },
        "docBranch": layers_to_doc(model.doc_layers),
        "codeBranch": layers_to_doc(model.code_layers),
        "head": layers_to_doc(model.head_layers),
    }


def model_from_doc(doc: dict) -> DualBranchModel:
    from .errors import FormatError

    if doc.get("schema") != SCHEMA_VERSION:
        raise FormatError(f"unsupported model schema {doc.get('schema')!r}")
    cfg = ModelConfig(
        doc_sizes=tuple(doc["config"]["docSizes"]),
        code_sizes=tuple(doc["config"]["codeSizes"]),
        head_sizes=tuple(doc["config"]["headSizes"]),
        n_classes=doc["config"]["nClasses"],
        seed=doc["config"]["seed"],
    )
    return DualBranchModel(
        config=cfg,
        doc_layers=layers_from_doc(doc["docBranch"]),
        code_layers=layers_from_doc(doc["codeBranch"]),
        head_layers=layers_from_doc(doc["head"]),
    )
