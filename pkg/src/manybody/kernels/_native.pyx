# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: per-axis cumulative sweeps and Fisher-matrix assembly.

Mirrors the API of ``manybody.kernels._fallback``; the sweeps run in place
over a single flat row-major buffer, and the matrix assembly needs no
O(n^2 * D) index temporaries.
"""

import numpy as np


cdef void _suffix_sweeps(double[::1] flat, Py_ssize_t[::1] dims) noexcept nogil:
    cdef Py_ssize_t ndim = dims.shape[0]
    cdef Py_ssize_t total = flat.shape[0]
    cdef Py_ssize_t outer = 1
    cdef Py_ssize_t rem = total
    cdef Py_ssize_t d, size_d, inner, block, o, i, k, base, row, nxt
    for d in range(ndim):
        size_d = dims[d]
        rem //= size_d
        inner = rem
        block = size_d * inner
        for o in range(outer):
            base = o * block
            for i in range(size_d - 2, -1, -1):
                row = base + i * inner
                nxt = row + inner
                for k in range(inner):
                    flat[row + k] += flat[nxt + k]
        outer *= size_d


cdef void _prefix_sweeps(double[::1] flat, Py_ssize_t[::1] dims) noexcept nogil:
    cdef Py_ssize_t ndim = dims.shape[0]
    cdef Py_ssize_t total = flat.shape[0]
    cdef Py_ssize_t outer = 1
    cdef Py_ssize_t rem = total
    cdef Py_ssize_t d, size_d, inner, block, o, i, k, base, row, prv
    for d in range(ndim):
        size_d = dims[d]
        rem //= size_d
        inner = rem
        block = size_d * inner
        for o in range(outer):
            base = o * block
            for i in range(1, size_d):
                row = base + i * inner
                prv = row - inner
                for k in range(inner):
                    flat[row + k] += flat[prv + k]
        outer *= size_d


def suffix_cumsum(values):
    """Reverse cumulative sums along every axis; returns a new array."""
    out = np.array(values, dtype=np.float64, order="C")
    cdef double[::1] flat = out.ravel()
    cdef Py_ssize_t[::1] dims = np.array(out.shape, dtype=np.intp)
    if flat.shape[0] > 0:
        _suffix_sweeps(flat, dims)
    return out


def prefix_cumsum(values):
    """Forward cumulative sums along every axis; returns a new array."""
    out = np.array(values, dtype=np.float64, order="C")
    cdef double[::1] flat = out.ravel()
    cdef Py_ssize_t[::1] dims = np.array(out.shape, dtype=np.intp)
    if flat.shape[0] > 0:
        _prefix_sweeps(flat, dims)
    return out


def fisher_matrix(eta, basis, eta_b):
    """``G[u, v] = eta[max(b_u, b_v)] - eta_b[u] * eta_b[v]`` (componentwise max)."""
    eta_c = np.ascontiguousarray(eta, dtype=np.float64)
    basis_c = np.ascontiguousarray(basis, dtype=np.intp)
    eta_b_c = np.ascontiguousarray(eta_b, dtype=np.float64)
    cdef Py_ssize_t n = basis_c.shape[0]
    cdef Py_ssize_t ndim = basis_c.shape[1]
    out_arr = np.empty((n, n), dtype=np.float64)
    if n == 0:
        return out_arr
    strides_arr = np.empty(ndim, dtype=np.intp)
    cdef Py_ssize_t acc = 1
    cdef Py_ssize_t d
    for d in range(ndim - 1, -1, -1):
        strides_arr[d] = acc
        acc *= eta_c.shape[d]

    cdef double[::1] eta_flat = eta_c.ravel()
    cdef Py_ssize_t[:, ::1] bi = basis_c
    cdef double[::1] eb = eta_b_c
    cdef Py_ssize_t[::1] strides = strides_arr
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t u, v, off, a, b
    cdef double g
    with nogil:
        for u in range(n):
            for v in range(u, n):
                off = 0
                for d in range(ndim):
                    a = bi[u, d]
                    b = bi[v, d]
                    off += (a if a > b else b) * strides[d]
                g = eta_flat[off] - eb[u] * eb[v]
                out[u, v] = g
                out[v, u] = g
    return out_arr
