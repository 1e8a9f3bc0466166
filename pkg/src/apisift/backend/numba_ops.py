"""Numba-compiled implementations of the hot aggregation kernels.

Importing this module requires numba; the backend selector falls back to
the numpy implementations when it is unavailable.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def _attention_forward(combined, attn):
    m, dim = combined.shape
    scores = np.empty(m)
    for i in range(m):
        s = 0.0
        for j in range(dim):
            s += combined[i, j] * attn[j]
        scores[i] = s
    top = scores[0]
    for i in range(1, m):
        if scores[i] > top:
            top = scores[i]
    total = 0.0
    weights = np.empty(m)
    for i in range(m):
        weights[i] = np.exp(scores[i] - top)
        total += weights[i]
    for i in range(m):
        weights[i] /= total
    out = np.zeros(dim)
    for i in range(m):
        wi = weights[i]
        for j in range(dim):
            out[j] += wi * combined[i, j]
    return out, weights


@njit(cache=True)
def _attention_backward(combined, weights, attn, out_grad):
    m, dim = combined.shape
    dw = np.empty(m)
    for i in range(m):
        s = 0.0
        for j in range(dim):
            s += combined[i, j] * out_grad[j]
        dw[i] = s
    mean = 0.0
    for i in range(m):
        mean += weights[i] * dw[i]
    ds = np.empty(m)
    for i in range(m):
        ds[i] = weights[i] * (dw[i] - mean)
    d_combined = np.empty((m, dim))
    for i in range(m):
        for j in range(dim):
            d_combined[i, j] = weights[i] * out_grad[j] + ds[i] * attn[j]
    d_attn = np.zeros(dim)
    for i in range(m):
        for j in range(dim):
            d_attn[j] += ds[i] * combined[i, j]
    return d_combined, d_attn


@njit(cache=True)
def _scatter_add_rows(target, idx, rows):
    for i in range(idx.shape[0]):
        t = idx[i]
        for j in range(rows.shape[1]):
            target[t, j] += rows[i, j]


def attention_forward(combined: np.ndarray, attn: np.ndarray):
    return _attention_forward(np.ascontiguousarray(combined), np.ascontiguousarray(attn))


def attention_backward(combined, weights, attn, out_grad):
    return _attention_backward(
        np.ascontiguousarray(combined),
        np.ascontiguousarray(weights),
        np.ascontiguousarray(attn),
        np.ascontiguousarray(out_grad),
    )


def scatter_add_rows(target, idx, rows):
    _scatter_add_rows(
        target, np.ascontiguousarray(idx.astype(np.int64)), np.ascontiguousarray(rows)
    )
