"""Deterministic documentation embeddings.

Documentation text is normalized, hashed into a large term-frequency
vector, optionally IDF-weighted, then projected to 768 dimensions with a
seeded sparse random sign matrix and L2-normalized.  The projection
approximately preserves cosine similarity, which is all the downstream
classifier consumes.  Externally produced 768-dim vectors can be loaded
from the same file format instead.
"""

from __future__ import annotations

import math
import re
import zlib
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

DOC_DIM = 768
DEFAULT_BUCKETS = 1 << 18

_TAG_RE = re.compile(r"<[^>]*>")
_LINK_RE = re.compile(r"\{@(\w+)\s*([^}]*)\}")
_AT_WORD_RE = re.compile(r"(?<!\S)@\w+")
_TOKEN_RE = re.compile(r"[a-z0-9]+")


def strip_markup(text: str) -> str:
    """Remove doc-markup markers, keeping their payload words."""
    text = _LINK_RE.sub(lambda m: m.group(2), text)  # {@link Foo} -> Foo
    text = _TAG_RE.sub(" ", text)
    text = _AT_WORD_RE.sub(" ", text)  # @param / @return markers
    return text


def normalize_doc(text: str) -> list[str]:
    """Lowercase, strip markup, split into alphanumeric tokens."""
    cleaned = strip_markup(text).lower()
    return _TOKEN_RE.findall(cleaned)


@dataclass
class DocPipelineConfig:
    hash_buckets: int = DEFAULT_BUCKETS
    projection_seed: int = 0
    idf_table: dict[str, float] | None = None
    strip_tags: bool = True

    def __post_init__(self):
        if self.hash_buckets < DOC_DIM:
            raise ConfigError(f"hash_buckets must be >= {DOC_DIM}, got {self.hash_buckets}")


@dataclass
class DocVector:
    values: np.ndarray  # float64, shape (768,)
    zero_doc: bool = False


def _bucket(token: str, buckets: int) -> int:
    return zlib.crc32(token.encode("utf-8")) % buckets


def _projection_row(bucket: int, seed: int) -> np.ndarray:
    """Sparse sign row of the projection matrix for one hash bucket.

    Rows are generated on demand from a counter-based generator keyed by
    (seed, bucket), so the full buckets x 768 matrix never materializes.
    Entries are +-sqrt(3) with probability 1/6 each, else 0.
    """
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, bucket], dtype=np.uint64)))
    draws = rng.random(DOC_DIM)
    row = np.zeros(DOC_DIM)
    row[draws < 1.0 / 6.0] = math.sqrt(3.0)
    row[draws > 5.0 / 6.0] = -math.sqrt(3.0)
    return row


def hashed_tf(tokens: list[str], cfg: DocPipelineConfig) -> dict[int, float]:
    """Bucketed term weights (term frequency times optional IDF)."""
    counts: dict[int, float] = {}
    for tok in tokens:
        weight = 1.0
        if cfg.idf_table is not None:
            weight = cfg.idf_table.get(tok, 1.0)
        b = _bucket(tok, cfg.hash_buckets)
        counts[b] = counts.get(b, 0.0) + weight
    return counts


def embed_doc(tokens: list[str], cfg: DocPipelineConfig) -> DocVector:
    """Embed a normalized token sequence into a unit-norm 768-vector."""
    weights = hashed_tf(tokens, cfg)
    if not weights:
        return DocVector(np.zeros(DOC_DIM), zero_doc=True)
    out = np.zeros(DOC_DIM)
    for bucket in sorted(weights):
        out += weights[bucket] * _projection_row(bucket, cfg.projection_seed)
    norm = float(np.linalg.norm(out))
    if norm == 0.0:
        # all touched rows were zero; astronomically unlikely but legal
        return DocVector(out, zero_doc=True)
    return DocVector(out / norm)


def embed_text(text: str, cfg: DocPipelineConfig) -> DocVector:
    if cfg.strip_tags:
        tokens = normalize_doc(text)
    else:
        tokens = _TOKEN_RE.findall(text.lower())
    return embed_doc(tokens, cfg)


def load_external_vectors(path) -> dict[str, DocVector]:
    """Import 768-dim vectors produced by an external encoder.

    Rows are L2-normalized on load (a no-op for already-unit vectors);
    all-zero rows keep the zero-doc flag instead.
    """
    from .fileio import read_vector_store

    out: dict[str, DocVector] = {}
    for sig, values in read_vector_store(path, DOC_DIM).items():
        norm = float(np.linalg.norm(values))
        if norm == 0.0:
            out[sig] = DocVector(values, zero_doc=True)
        else:
            out[sig] = DocVector(values / norm)
    return out


def idf_from_corpus(token_bags: list[list[str]]) -> dict[str, float]:
    """Smoothed inverse document frequency over the given token bags."""
    n = len(token_bags)
    df: dict[str, int] = {}
    for bag in token_bags:
        for tok in set(bag):
            df[tok] = df.get(tok, 0) + 1
    return {tok: math.log((1 + n) / (1 + d)) + 1.0 for tok, d in df.items()}


def exact_tf_cosine(a: list[str], b: list[str], cfg: DocPipelineConfig) -> float:
    """Cosine of the un-projected hashed term-frequency vectors (oracle)."""
    wa = hashed_tf(a, cfg)
    wb = hashed_tf(b, cfg)
    dot = sum(wa[k] * wb[k] for k in wa.keys() & wb.keys())
    na = math.sqrt(sum(v * v for v in wa.values()))
    nb = math.sqrt(sum(v * v for v in wb.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)
