"""Pure-NumPy implementations of the hot kernels.

Same contracts as ``_native``; see ``manybody.kernels`` for the API notes.
"""

import numpy as np


def suffix_cumsum(values):
    """Reverse cumulative sums along every axis.

    ``out[i] = sum(values[j] for j >= i componentwise)``; returns a new
    float64 array of the same shape.
    """
    out = np.array(values, dtype=np.float64, order="C")
    for ax in range(out.ndim):
        out = np.flip(np.cumsum(np.flip(out, ax), axis=ax), ax)
    return np.ascontiguousarray(out)


def prefix_cumsum(values):
    """Forward cumulative sums along every axis.

    ``out[i] = sum(values[j] for j <= i componentwise)``.
    """
    out = np.array(values, dtype=np.float64, order="C")
    for ax in range(out.ndim):
        np.cumsum(out, axis=ax, out=out)
    return out


def fisher_matrix(eta, basis, eta_b):
    """Assemble ``G[u, v] = eta[max(b_u, b_v)] - eta_b[u] * eta_b[v]``.

    Parameters
    ----------
    eta : ndarray
        Full expectation-parameter tensor.
    basis : (n, D) integer ndarray
        Zero-based multi-indices of the free parameters.
    eta_b : (n,) ndarray
        ``eta`` gathered at the basis rows.
    """
    eta = np.ascontiguousarray(eta, dtype=np.float64)
    basis = np.ascontiguousarray(basis, dtype=np.intp)
    n, ndim = basis.shape
    if n == 0:
        return np.empty((0, 0))
    strides = np.empty(ndim, dtype=np.intp)
    acc = 1
    for d in range(ndim - 1, -1, -1):
        strides[d] = acc
        acc *= eta.shape[d]
    # accumulate flat offsets of the componentwise max, one axis at a time,
    # to keep temporaries at O(n^2) instead of O(n^2 * D)
    flat = np.zeros((n, n), dtype=np.intp)
    for d in range(ndim):
        col = basis[:, d]
        flat += np.maximum(col[:, None], col[None, :]) * strides[d]
    return eta.ravel()[flat] - np.outer(eta_b, eta_b)
