"""Shared test utilities: independent reference implementations.

Everything here is deliberately brute force (explicit recursions and loops
over all indices) so it shares no code path with the library under test.
"""

import itertools

import numpy as np


def random_normalized(rng, dims, floor=0.05):
    """Strictly positive tensor with unit total sum."""
    x = rng.random(dims) + floor
    return x / x.sum()


def mobius(lo, hi, cache):
    """Moebius function of the product-of-chains lattice, by the defining
    recursion: mu(a, a) = 1 and sum of mu(a, z) over a <= z <= b is 0."""
    lo, hi = tuple(lo), tuple(hi)
    if any(h < l for l, h in zip(lo, hi)):
        return 0
    key = (lo, hi)
    if key in cache:
        return cache[key]
    if lo == hi:
        return 1
    total = 0
    for mid in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        if mid != hi:
            total += mobius(lo, mid, cache)
    cache[key] = -total
    return -total


def theta_by_mobius(p):
    """Natural parameters via the explicit Moebius sum over log p (0-based)."""
    logp = np.log(p)
    out = np.zeros_like(logp)
    cache = {}
    for idx in np.ndindex(*p.shape):
        acc = 0.0
        for src in itertools.product(*(range(i + 1) for i in idx)):
            acc += mobius(src, idx, cache) * logp[src]
        out[idx] = acc
    return out


def tensor_from_eta_by_mobius(eta):
    """Tensor via the explicit Moebius sum over the eta array."""
    dims = eta.shape
    out = np.zeros_like(eta)
    cache = {}
    for idx in np.ndindex(*dims):
        acc = 0.0
        for dst in itertools.product(*(range(i, n) for i, n in zip(idx, dims))):
            acc += mobius(idx, dst, cache) * eta[dst]
        out[idx] = acc
    return out


def eta_by_summation(p):
    """Expectation parameters by direct double loop over index pairs."""
    out = np.zeros_like(p)
    for idx in np.ndindex(*p.shape):
        total = 0.0
        for src in np.ndindex(*p.shape):
            if all(s >= i for s, i in zip(src, idx)):
                total += p[src]
        out[idx] = total
    return out


def logp_from_theta_by_summation(theta):
    """Prefix box sums of theta by direct double loop."""
    out = np.zeros_like(theta)
    for idx in np.ndindex(*theta.shape):
        total = 0.0
        for src in np.ndindex(*theta.shape):
            if all(s <= i for s, i in zip(src, idx)):
                total += theta[src]
        out[idx] = total
    return out


def ring_contract_by_loops(cores):
    """Ring contraction by explicit summation over every bond configuration."""
    dims = [c.shape[1] for c in cores]
    ranks = [c.shape[2] for c in cores]
    out = np.zeros(dims)
    for idx in np.ndindex(*dims):
        total = 0.0
        for bonds in itertools.product(*(range(r) for r in ranks)):
            prod = 1.0
            for d, core in enumerate(cores):
                prod *= core[bonds[d - 1], idx[d], bonds[d]]
            total += prod
        out[idx] = total
    return out


def max_abs_minor(matrix):
    """Largest absolute 2x2 minor; 0 for rank-1 matrices."""
    worst = 0.0
    rows = matrix.shape[0]
    for i in range(rows):
        for j in range(i + 1, rows):
            cross = np.outer(matrix[i], matrix[j])
            worst = max(worst, float(np.abs(cross - cross.T).max()))
    return worst


def matricizations(tensor):
    """All mode unfoldings of a tensor."""
    return [
        np.moveaxis(tensor, d, 0).reshape(tensor.shape[d], -1)
        for d in range(tensor.ndim)
    ]


def outer_product(vectors):
    out = np.array(vectors[0], dtype=np.float64)
    for vec in vectors[1:]:
        out = np.multiply.outer(out, np.asarray(vec, dtype=np.float64))
    return out
