"""Kernel backend selection.

The aggregation kernels exist twice: a numba-compiled version and a
pure-numpy version.  The APISIFT_BACKEND environment variable picks one:

* ``auto`` (default): numba when importable, else numpy;
* ``numba``: require numba, fail if unavailable;
* ``numpy``: always use the numpy implementations.

:func:`select_backend` switches at runtime (used by tests and the
benchmark); the choice is process-wide.
"""

from __future__ import annotations

import os

from ..errors import ConfigError
from . import numpy_ops

_impl = None
_fallback_reason: str | None = None


def _load(name: str):
    global _fallback_reason
    if name == "numpy":
        return numpy_ops
    if name == "numba":
        from . import numba_ops  # raises ImportError when numba is absent

        return numba_ops
    if name == "auto":
        try:
            from . import numba_ops

            return numba_ops
        except ImportError as exc:
            _fallback_reason = str(exc)
            return numpy_ops
    raise ConfigError(f"unknown backend {name!r} (expected auto, numba or numpy)")


def select_backend(name: str) -> str:
    """Force a backend; returns the active backend's name."""
    global _impl
    if name == "numba":
        try:
            _impl = _load("numba")
        except ImportError as exc:
            raise ConfigError(f"numba backend requested but unavailable: {exc}") from exc
    else:
        _impl = _load(name)
    return _impl.NAME


def _ensure():
    global _impl
    if _impl is None:
        select_backend(os.environ.get("APISIFT_BACKEND", "auto"))
    return _impl


def current_backend() -> str:
    return _ensure().NAME


def attention_forward(combined, attn):
    return _ensure().attention_forward(combined, attn)


def attention_backward(combined, weights, attn, out_grad):
    return _ensure().attention_backward(combined, weights, attn, out_grad)


def scatter_add_rows(target, idx, rows):
    return _ensure().scatter_add_rows(target, idx, rows)
