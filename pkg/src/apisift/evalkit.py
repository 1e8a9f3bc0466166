"""Shared evaluation machinery: metrics, agreement, overlap, sampling.

Class order is SOURCE, SINK, NEITHER throughout; confusion-matrix rows
are true labels and columns are predictions.  Zero-denominator metrics
are reported as 0.0 with an explicit flag instead of being omitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from .errors import ConfigError, LengthMismatch

LABELS = ("SOURCE", "SINK", "NEITHER")
LABEL_TO_INDEX = {lab: i for i, lab in enumerate(LABELS)}


@dataclass
class ConfusionMatrix:
    counts: np.ndarray  # (k, k) ints; rows true, cols predicted
    labels: tuple[str, ...] = LABELS

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        k = len(self.labels)
        if self.counts.shape != (k, k):
            raise ConfigError(f"confusion matrix must be {k}x{k}, got {self.counts.shape}")
        if np.any(self.counts < 0):
            raise ConfigError("confusion matrix counts must be non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def confusion_from_labels(
    true: list[str], predicted: list[str], labels: tuple[str, ...] = LABELS
) -> ConfusionMatrix:
    if len(true) != len(predicted):
        raise LengthMismatch(f"{len(true)} true labels vs {len(predicted)} predictions")
    index = {lab: i for i, lab in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for t, p in zip(true, predicted):
        if t not in index or p not in index:
            raise ConfigError(f"label outside alphabet {labels}: {t!r}/{p!r}")
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(counts, labels)


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    zero_division_flags: list[str] = field(default_factory=list)


@dataclass
class MetricsReport:
    per_class: dict[str, ClassMetrics]
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    total: int
    kappa: float | None = None


def _ratio(num: float, den: float, flags: list[str], what: str) -> float:
    if den == 0:
        flags.append(what)
        return 0.0
    return num / den


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    """One-vs-rest precision/recall/F1 per class plus aggregate averages."""
    counts = cm.counts
    total = cm.total
    per_class: dict[str, ClassMetrics] = {}
    for i, label in enumerate(cm.labels):
        flags: list[str] = []
        tp = float(counts[i, i])
        predicted = float(counts[:, i].sum())
        actual = float(counts[i, :].sum())
        precision = _ratio(tp, predicted, flags, "precision")
        recall = _ratio(tp, actual, flags, "recall")
        f1 = _ratio(2 * precision * recall, precision + recall, flags, "f1")
        per_class[label] = ClassMetrics(precision, recall, f1, int(actual), flags)
    k = len(cm.labels)
    accuracy = float(np.trace(counts)) / total if total else 0.0
    supports = np.array([per_class[lab].support for lab in cm.labels], dtype=np.float64)
    weight = supports / supports.sum() if supports.sum() else np.zeros(k)

    def agg(attr):
        vals = np.array([getattr(per_class[lab], attr) for lab in cm.labels])
        return float(vals.mean()), float((vals * weight).sum())

    macro_p, weighted_p = agg("precision")
    macro_r, weighted_r = agg("recall")
    macro_f, weighted_f = agg("f1")
    return MetricsReport(
        per_class=per_class,
        accuracy=accuracy,
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=macro_f,
        weighted_precision=weighted_p,
        weighted_recall=weighted_r,
        weighted_f1=weighted_f,
        total=total,
    )


@dataclass
class KappaResult:
    kappa: float
    observed_agreement: float
    expected_agreement: float
    degenerate: bool = False  # expected agreement was 1


def cohen_kappa_details(labels_a: list[str], labels_b: list[str]) -> KappaResult:
    """Cohen's kappa with its intermediate agreement terms."""
    if len(labels_a) != len(labels_b):
        raise LengthMismatch(f"{len(labels_a)} vs {len(labels_b)} ratings")
    if not labels_a:
        raise ConfigError("kappa needs at least one rating pair")
    n = len(labels_a)
    alphabet = sorted(set(labels_a) | set(labels_b))
    idx = {lab: i for i, lab in enumerate(alphabet)}
    joint = np.zeros((len(alphabet), len(alphabet)), dtype=np.float64)
    for a, b in zip(labels_a, labels_b):
        joint[idx[a], idx[b]] += 1
    joint /= n
    p_o = float(np.trace(joint))
    p_e = float(np.sum(joint.sum(axis=1) * joint.sum(axis=0)))
    if p_e >= 1.0 - 1e-15:
        # both raters constant: agreement carries no chance correction
        return KappaResult(1.0 if p_o >= 1.0 - 1e-15 else 0.0, p_o, p_e, degenerate=True)
    return KappaResult((p_o - p_e) / (1.0 - p_e), p_o, p_e)


def cohen_kappa(labels_a: list[str], labels_b: list[str]) -> float:
    return cohen_kappa_details(labels_a, labels_b).kappa


@dataclass
class OverlapReport:
    size_a: int
    size_b: int
    intersection: int
    only_a: int
    only_b: int


def overlap(list_a: set[str], list_b: set[str]) -> OverlapReport:
    a, b = set(list_a), set(list_b)
    inter = a & b
    return OverlapReport(len(a), len(b), len(inter), len(a - b), len(b - a))


def sample_for_review(items: list[str], n: int, seed: int) -> list[str]:
    """Uniform sample without replacement; sorted, deterministic."""
    if n < 0:
        raise ConfigError(f"sample size must be >= 0, got {n}")
    if n > len(items):
        raise ConfigError(f"sample size {n} exceeds population {len(items)}")
    ordered = sorted(items)
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(ordered), size=n, replace=False)
    return sorted(ordered[i] for i in picks)


def required_sample_size(
    population: int, confidence: float = 0.95, margin: float = 0.10, proportion: float = 0.5
) -> int:
    """Sample size for a proportion at the given confidence and margin.

    Standard normal-approximation formula with finite-population
    correction, rounded up.
    """
    if population <= 0:
        raise ConfigError(f"population must be positive, got {population}")
    if not 0 < confidence < 1 or not 0 < margin < 1:
        raise ConfigError("confidence and margin must lie in (0, 1)")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    n0 = (z * z * proportion * (1 - proportion)) / (margin * margin)
    adjusted = n0 / (1 + (n0 - 1) / population)
    return math.ceil(adjusted)


def meets_sample_rule(population: int, n: int, confidence: float = 0.95, margin: float = 0.10) -> bool:
    return n >= required_sample_size(population, confidence, margin)
