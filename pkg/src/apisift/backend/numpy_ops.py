"""Pure-numpy reference implementations of the hot aggregation kernels."""

from __future__ import annotations

import numpy as np

NAME = "numpy"


def attention_forward(combined: np.ndarray, attn: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Softmax-attention aggregation of context vectors.

    combined: (m, dim) rows; attn: (dim,).  Returns (aggregate (dim,),
    weights (m,)).
    """
    scores = combined @ attn
    scores = scores - scores.max()
    e = np.exp(scores)
    weights = e / e.sum()
    return weights @ combined, weights


def attention_backward(
    combined: np.ndarray, weights: np.ndarray, attn: np.ndarray, out_grad: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Gradients of the aggregation w.r.t. context rows and attention vector."""
    dw = combined @ out_grad
    ds = weights * (dw - float(weights @ dw))
    d_combined = np.outer(weights, out_grad) + np.outer(ds, attn)
    d_attn = combined.T @ ds
    return d_combined, d_attn


def scatter_add_rows(target: np.ndarray, idx: np.ndarray, rows: np.ndarray) -> None:
    """target[idx[i]] += rows[i] with repeated indices accumulating."""
    np.add.at(target, idx, rows)
