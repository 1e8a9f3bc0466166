"""Seeded synthetic datasets for training and evaluation exercises.

Three generators:

* vector datasets with one Gaussian cluster per class in doc-space and
  code-space, with independently configurable separation per space;
* a header-rule corpus where the label is a pure function of the method
  name prefix (a signature classifier should be near-perfect on it);
* a body-only corpus where every header is identical and the label is
  encoded solely in the body (a signature classifier is at chance).
"""

from __future__ import annotations

import numpy as np

from .classifier import Dataset
from .codevec import CODE_DIM
from .corpus import MethodRecord
from .docvec import DOC_DIM
from .errors import ConfigError
from .evalkit import LABELS


def make_vector_dataset(
    n: int,
    seed: int,
    doc_separation: float = 4.0,
    code_separation: float = 4.0,
    noise: float = 1.0,
) -> Dataset:
    """Gaussian class clusters; separation 0 makes a space uninformative.

    Class means are random unit directions scaled by the separation; a
    separation of 0 collapses all class means to the origin so that
    space carries no label information.
    """
    if n < len(LABELS):
        raise ConfigError(f"need at least {len(LABELS)} examples, got {n}")
    rng = np.random.default_rng(seed)

    def class_means(dim: int, separation: float) -> np.ndarray:
        directions = rng.normal(size=(len(LABELS), dim))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        return directions * separation

    doc_means = class_means(DOC_DIM, doc_separation)
    code_means = class_means(CODE_DIM, code_separation)
    labels = np.array([i % len(LABELS) for i in range(n)], dtype=np.int64)
    doc = doc_means[labels] + rng.normal(scale=noise, size=(n, DOC_DIM))
    code = code_means[labels] + rng.normal(scale=noise, size=(n, CODE_DIM))
    signatures = [f"synth.Blob#m{i:05d}():void" for i in range(n)]
    return Dataset(signatures, doc, code, labels)


_RULE_PREFIXES = {"SOURCE": "get", "SINK": "send", "NEITHER": "update"}
_RULE_CLASSES = ("Account", "Device", "Network", "Session", "Profile")


def rule_label_for(name: str) -> str:
    """The ground-truth rule: label determined by the name prefix."""
    for label, prefix in _RULE_PREFIXES.items():
        if name.startswith(prefix):
            return label
    return "NEITHER"


def make_rule_corpus(n: int, seed: int) -> tuple[list[MethodRecord], list[str]]:
    """Records whose label is exactly the name-prefix rule."""
    rng = np.random.default_rng(seed)
    records: list[MethodRecord] = []
    labels: list[str] = []
    nouns = ("Token", "Count", "Status", "Value", "Entry", "Flag")
    for i in range(n):
        label = LABELS[i % len(LABELS)]
        prefix = _RULE_PREFIXES[label]
        noun = nouns[int(rng.integers(0, len(nouns)))]
        name = f"{prefix}{noun}{i}"
        cls = _RULE_CLASSES[int(rng.integers(0, len(_RULE_CLASSES)))]
        n_params = int(rng.integers(0, 3))
        params = tuple(rng.choice(["int", "String", "long"]) for _ in range(n_params))
        body = f"int a{i} = {int(rng.integers(0, 100))}; return a{i};"
        records.append(
            MethodRecord(
                fqcn=f"synth.rule.{cls}Manager",
                name=name,
                params=params,
                return_type=str(rng.choice(["int", "String", "void", "boolean"])),
                modifiers=frozenset(["public"]),
                body_text=body,
                doc_text=f"{prefix} operation number {i}",
                doc_origin="self",
            )
        )
        labels.append(label)
    return records, labels


def make_body_only_corpus(n: int, seed: int) -> tuple[list[MethodRecord], list[str]]:
    """Identical headers; the label is visible only in the body text.

    Every record shares the same name, class, params, return type and
    modifiers, so any classifier restricted to header features cannot
    beat chance.  The body contains a class-specific marker token.
    """
    rng = np.random.default_rng(seed)
    markers = {"SOURCE": "fetchSecret", "SINK": "pushOutbound", "NEITHER": "shuffleLocal"}
    records: list[MethodRecord] = []
    labels: list[str] = []
    for i in range(n):
        label = LABELS[i % len(LABELS)]
        marker = markers[label]
        body = f"int t{i} = {marker}({int(rng.integers(0, 50))}); return t{i};"
        records.append(
            MethodRecord(
                fqcn="synth.body.Opaque",
                name="process",
                params=("int",),
                return_type="int",
                modifiers=frozenset(["public"]),
                body_text=body,
                doc_text="process a request",
                doc_origin="self",
            )
        )
        labels.append(label)
    return records, labels
