"""Code vectors: attention-aggregated path contexts, 384 floats per method.

Each context (left token, path, right token) is embedded by looking up
token and path embeddings, concatenating to a 3d vector, and passing it
through a tanh dense combiner to 384 dimensions.  A learned attention
vector scores the combined contexts; their softmax-weighted sum is the
method's code vector.  Training predicts the method name from that
vector with softmax cross-entropy.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .corpus import MethodRecord
from .errors import ConfigError, ShapeError
from .nnet import Optimizer, TrainConfig
from .pathctx import PathContext, build_ast, extract_path_contexts, path_key

CODE_DIM = 384
UNK = 0  # reserved id in token and path vocabularies


@dataclass
class EmbedderConfig:
    d: int = 128
    max_len: int = 8
    max_width: int = 2
    context_cap: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise ConfigError(f"embedding width must be >= 1, got {self.d}")
        if self.context_cap < 1:
            raise ConfigError(f"context_cap must be >= 1, got {self.context_cap}")


@dataclass
class EmbedderParams:
    cfg: EmbedderConfig
    token_vocab: list[str]  # index 0 is the UNK slot
    path_vocab: list[str]
    name_vocab: list[str]
    token_emb: np.ndarray  # (|Vtok|, d)
    path_emb: np.ndarray  # (|Vpath|, d)
    combiner_w: np.ndarray  # (384, 3d)
    combiner_b: np.ndarray  # (384,)
    attention: np.ndarray  # (384,)
    name_emb: np.ndarray  # (|Vname|, 384)
    token_ids: dict[str, int] = field(default_factory=dict)
    path_ids: dict[str, int] = field(default_factory=dict)
    name_ids: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.token_ids:
            self.token_ids = {t: i for i, t in enumerate(self.token_vocab)}
        if not self.path_ids:
            self.path_ids = {p: i for i, p in enumerate(self.path_vocab)}
        if not self.name_ids:
            self.name_ids = {n: i for i, n in enumerate(self.name_vocab)}
        d = self.cfg.d
        if self.token_emb.shape != (len(self.token_vocab), d):
            raise ShapeError("token embedding shape does not match vocabulary")
        if self.path_emb.shape != (len(self.path_vocab), d):
            raise ShapeError("path embedding shape does not match vocabulary")
        if self.combiner_w.shape != (CODE_DIM, 3 * d):
            raise ShapeError(f"combiner must map 3d -> {CODE_DIM}")
        if self.name_emb.shape[1] != CODE_DIM:
            raise ShapeError("name embeddings must have 384 columns")


@dataclass
class CodeVector:
    values: np.ndarray  # (384,)
    empty_bag: bool = False


def method_contexts(record: MethodRecord, cfg: EmbedderConfig) -> list[PathContext]:
    """Path contexts for one method, capped by deterministic subsampling.

    The subsample seed mixes the embedder seed with the method signature,
    so a method's contexts do not depend on corpus composition or order.
    """
    contexts = extract_path_contexts(build_ast(record), cfg.max_len, cfg.max_width)
    if len(contexts) <= cfg.context_cap:
        return contexts
    seq = np.random.SeedSequence([cfg.seed, zlib.crc32(record.signature.encode("utf-8"))])
    rng = np.random.default_rng(seq)
    keep = np.sort(rng.choice(len(contexts), size=cfg.context_cap, replace=False))
    return [contexts[i] for i in keep]


def build_vocabs(
    per_method_contexts: list[list[PathContext]], names: list[str]
) -> tuple[list[str], list[str], list[str]]:
    """Vocabulary lists; tokens and paths reserve index 0 for unknowns."""
    tokens: dict[str, None] = {}
    paths: dict[str, None] = {}
    for contexts in per_method_contexts:
        for ctx in contexts:
            tokens.setdefault(ctx.left, None)
            tokens.setdefault(ctx.right, None)
            paths.setdefault(path_key(ctx.path), None)
    name_vocab = sorted(set(names))
    return (
        ["<unk>"] + sorted(tokens),
        ["<unk>"] + sorted(paths),
        name_vocab,
    )


def init_params(
    cfg: EmbedderConfig,
    token_vocab: list[str],
    path_vocab: list[str],
    name_vocab: list[str],
) -> EmbedderParams:
    rng = np.random.default_rng(cfg.seed)
    d = cfg.d
    scale = 1.0 / np.sqrt(d)
    token_emb = rng.uniform(-scale, scale, size=(len(token_vocab), d))
    path_emb = rng.uniform(-scale, scale, size=(len(path_vocab), d))
    limit = np.sqrt(6.0 / (3 * d))
    combiner_w = rng.uniform(-limit, limit, size=(CODE_DIM, 3 * d))
    combiner_b = np.zeros(CODE_DIM)
    attention = rng.uniform(-1.0, 1.0, size=CODE_DIM) / np.sqrt(CODE_DIM)
    name_emb = rng.uniform(-1.0, 1.0, size=(len(name_vocab), CODE_DIM)) / np.sqrt(CODE_DIM)
    return EmbedderParams(
        cfg=cfg,
        token_vocab=list(token_vocab),
        path_vocab=list(path_vocab),
        name_vocab=list(name_vocab),
        token_emb=token_emb,
        path_emb=path_emb,
        combiner_w=combiner_w,
        combiner_b=combiner_b,
        attention=attention,
        name_emb=name_emb,
    )


def contexts_to_ids(
    contexts: list[PathContext], params: EmbedderParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vocabulary ids with UNK fallback for unseen tokens/paths."""
    left = np.array([params.token_ids.get(c.left, UNK) for c in contexts], dtype=np.int64)
    path = np.array(
        [params.path_ids.get(path_key(c.path), UNK) for c in contexts], dtype=np.int64
    )
    right = np.array([params.token_ids.get(c.right, UNK) for c in contexts], dtype=np.int64)
    return left, path, right


@dataclass
class _Forward:
    concat: np.ndarray  # (m, 3d)
    combined: np.ndarray  # (m, 384)
    weights: np.ndarray  # (m,)
    vector: np.ndarray  # (384,)


def _forward_ids(
    left: np.ndarray, path: np.ndarray, right: np.ndarray, params: EmbedderParams
) -> _Forward:
    concat = np.concatenate(
        [params.token_emb[left], params.path_emb[path], params.token_emb[right]], axis=1
    )
    combined = np.tanh(concat @ params.combiner_w.T + params.combiner_b)
    vector, weights = backend.attention_forward(combined, params.attention)
    return _Forward(concat, combined, weights, vector)


def embed_code(record: MethodRecord, params: EmbedderParams) -> CodeVector:
    """Embed one method; an empty context bag yields the zero vector."""
    contexts = method_contexts(record, params.cfg)
    if not contexts:
        return CodeVector(np.zeros(CODE_DIM), empty_bag=True)
    fwd = _forward_ids(*contexts_to_ids(contexts, params), params)
    return CodeVector(fwd.vector)


def name_loss_and_grads(
    left: np.ndarray,
    path: np.ndarray,
    right: np.ndarray,
    name_id: int,
    params: EmbedderParams,
) -> tuple[float, dict[str, np.ndarray]]:
    """Loss and dense gradients of the name-prediction objective.

    Returns gradients for every parameter array keyed by field name.
    Embedding gradients are full-size matrices (zeros off the touched
    rows) so they can be fed to any optimizer or finite-difference check.
    """
    fwd = _forward_ids(left, path, right, params)
    logits = params.name_emb @ fwd.vector
    shifted = logits - logits.max()
    log_z = np.log(np.sum(np.exp(shifted)))
    loss = float(log_z - shifted[name_id])
    probs = np.exp(shifted - log_z)

    d_logits = probs.copy()
    d_logits[name_id] -= 1.0
    d_name_emb = np.outer(d_logits, fwd.vector)
    d_vector = params.name_emb.T @ d_logits

    d_combined, d_attention = backend.attention_backward(
        fwd.combined, fwd.weights, params.attention, d_vector
    )
    dz = d_combined * (1.0 - fwd.combined * fwd.combined)
    d_combiner_w = dz.T @ fwd.concat
    d_combiner_b = dz.sum(axis=0)
    d_concat = dz @ params.combiner_w

    d = params.cfg.d
    d_token_emb = np.zeros_like(params.token_emb)
    d_path_emb = np.zeros_like(params.path_emb)
    backend.scatter_add_rows(d_token_emb, left, d_concat[:, :d])
    backend.scatter_add_rows(d_path_emb, path, d_concat[:, d : 2 * d])
    backend.scatter_add_rows(d_token_emb, right, d_concat[:, 2 * d :])

    return loss, {
        "token_emb": d_token_emb,
        "path_emb": d_path_emb,
        "combiner_w": d_combiner_w,
        "combiner_b": d_combiner_b,
        "attention": d_attention,
        "name_emb": d_name_emb,
    }


PARAM_FIELDS = ("token_emb", "path_emb", "combiner_w", "combiner_b", "attention", "name_emb")


def train_code_embedder(
    records: list[MethodRecord],
    cfg: TrainConfig,
    ecfg: EmbedderConfig | None = None,
) -> EmbedderParams:
    """Train the embedder on name prediction over the given corpus."""
    if not records:
        raise ConfigError("cannot train the code embedder on an empty corpus")
    if ecfg is None:
        ecfg = EmbedderConfig(seed=cfg.seed)
    per_method = [method_contexts(r, ecfg) for r in records]
    names = [r.name for r in records]
    token_vocab, path_vocab, name_vocab = build_vocabs(per_method, names)
    params = init_params(ecfg, token_vocab, path_vocab, name_vocab)

    usable = [
        (contexts_to_ids(ctxs, params), params.name_ids[name])
        for ctxs, name in zip(per_method, names)
        if ctxs
    ]
    if not usable:
        return params

    opt = Optimizer(cfg)
    arrays = [getattr(params, f) for f in PARAM_FIELDS]
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.epochs):
        order = rng.permutation(len(usable))
        for idx in order:
            (left, path, right), name_id = usable[idx]
            _, grads = name_loss_and_grads(left, path, right, name_id, params)
            opt.apply(arrays, [grads[f] for f in PARAM_FIELDS])
    return params


def predict_name(record: MethodRecord, params: EmbedderParams) -> str:
    """Most likely method name under the trained objective."""
    contexts = method_contexts(record, params.cfg)
    if not contexts:
        return params.name_vocab[0] if params.name_vocab else ""
    fwd = _forward_ids(*contexts_to_ids(contexts, params), params)
    logits = params.name_emb @ fwd.vector
    return params.name_vocab[int(np.argmax(logits))]


def mean_corpus_loss(records: list[MethodRecord], params: EmbedderParams) -> float:
    total = 0.0
    count = 0
    for rec in records:
        contexts = method_contexts(rec, params.cfg)
        if not contexts or rec.name not in params.name_ids:
            continue
        left, path, right = contexts_to_ids(contexts, params)
        loss, _ = name_loss_and_grads(left, path, right, params.name_ids[rec.name], params)
        total += loss
        count += 1
    return total / count if count else 0.0


# ---------------------------------------------------------------------------
# checkpoint document

SCHEMA_VERSION = 1


def params_to_doc(params: EmbedderParams) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "config": {
            "d": params.cfg.d,
            "maxLen": params.cfg.max_len,
            "maxWidth": params.cfg.max_width,
            "contextCap": params.cfg.context_cap,
            "seed": params.cfg.seed,
        },
        "tokenVocab": params.token_vocab,
        "pathVocab": params.path_vocab,
        "nameVocab": params.name_vocab,
        "tokenEmb": params.token_emb.tolist(),
        "pathEmb": params.path_emb.tolist(),
        "combinerW": params.combiner_w.tolist(),
        "combinerB": params.combiner_b.tolist(),
        "attention": params.attention.tolist(),
        "nameEmb": params.name_emb.tolist(),
    }


def params_from_doc(doc: dict) -> EmbedderParams:
    from .errors import FormatError

    if doc.get("schema") != SCHEMA_VERSION:
        raise FormatError(f"unsupported embedder schema {doc.get('schema')!r}")
    cfg = EmbedderConfig(
        d=doc["config"]["d"],
        max_len=doc["config"]["maxLen"],
        max_width=doc["config"]["maxWidth"],
        context_cap=doc["config"]["contextCap"],
        seed=doc["config"]["seed"],
    )
    return EmbedderParams(
        cfg=cfg,
        token_vocab=list(doc["tokenVocab"]),
        path_vocab=list(doc["pathVocab"]),
        name_vocab=list(doc["nameVocab"]),
        token_emb=np.array(doc["tokenEmb"], dtype=np.float64),
        path_emb=np.array(doc["pathEmb"], dtype=np.float64),
        combiner_w=np.array(doc["combinerW"], dtype=np.float64),
        combiner_b=np.array(doc["combinerB"], dtype=np.float64),
        attention=np.array(doc["attention"], dtype=np.float64),
        name_emb=np.array(doc["nameEmb"], dtype=np.float64),
    )
