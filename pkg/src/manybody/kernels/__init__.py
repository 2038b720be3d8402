"""Hot numeric kernels with a compiled core and a NumPy fallback.

Three operations dominate the projection solver's inner loop:

* ``suffix_cumsum`` -- reverse cumulative sums along every axis (tensor ->
  expectation parameters),
* ``prefix_cumsum`` -- forward cumulative sums along every axis (natural
  parameters -> log tensor),
* ``fisher_matrix`` -- Gram matrix ``G[u, v] = eta[max(u, v)] - eta_u * eta_v``
  over a basis of multi-indices, where ``max`` is taken per coordinate.

At import time the Cython extension ``_native`` is preferred; if it is not
built (or ``MANYBODY_PURE_PYTHON=1`` is set) the pure-NumPy ``_fallback``
module provides the identical API. ``BACKEND`` records which one is active.
Both implementations are pure: they never mutate their arguments.
"""

import importlib
import os

from manybody.kernels import _fallback

_native = None
if os.environ.get("MANYBODY_PURE_PYTHON", "") in ("", "0"):
    try:
        _native = importlib.import_module("manybody.kernels._native")
    except ImportError:
        _native = None

_impl = _native if _native is not None else _fallback

BACKEND = "native" if _native is not None else "python"

suffix_cumsum = _impl.suffix_cumsum
prefix_cumsum = _impl.prefix_cumsum
fisher_matrix = _impl.fisher_matrix

__all__ = ["BACKEND", "suffix_cumsum", "prefix_cumsum", "fisher_matrix"]
