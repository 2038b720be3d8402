"""Multiplicative factors of a projected tensor.

A tensor inside an interaction-constrained family factorizes exactly: minus
its log decomposes into a constant plus one energy block per member subset,
and regrouping the blocks over the maximal subsets yields one strictly
positive factor per maximal subset whose broadcast elementwise product (times
the input's total sum) reproduces the tensor.

Shared lower-order blocks are divided equally among the maximal subsets that
contain them, and the partition function is split in equal K-th roots across
the K factors. For the cyclic pair structure the factors double as the
diagonal cores of a tensor-ring decomposition with ring rank equal to the
tensor's own dims; :func:`export_ring_cores` materializes those cores.
"""

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from manybody import kernels
from manybody.coordinates import THETA, CoordTensor, theta_from_tensor
from manybody.errors import (
    NotConvergedError,
    NotCyclicError,
    OffModelError,
    ShapeMismatchError,
)
from manybody.interactions import InteractionSet

_OFF_MODEL_TOL = 1e-6


@dataclass(frozen=True)
class EnergyTerms:
    """Energy decomposition: one block per member subset plus a constant.

    ``terms[S]`` has shape ``(I_d for d in S)`` and is 0 wherever some
    coordinate is 0; ``h0`` is minus the log-normalizer. Summing all blocks
    (broadcast over non-member modes) plus ``h0`` gives minus the log of the
    tensor.
    """

    h0: float
    terms: dict


@dataclass(frozen=True)
class FactorSet:
    """One strictly positive factor per maximal subset, plus bookkeeping.

    ``prod_j broadcast(factors[j]) * scale`` reproduces the projected tensor;
    ``z`` is the partition function ``exp(-theta[0, ..., 0])`` of the
    normalized tensor and ``scale`` the input's total sum.
    """

    subsets: tuple
    factors: tuple
    z: float
    scale: float


def _expand(arr, modes, ndim):
    shape = [1] * ndim
    for ax, d in enumerate(modes):
        shape[d] = arr.shape[ax]
    return arr.reshape(shape)


def covering_counts(iset):
    """Maximal subsets and, for every member subset, how many of them cover it."""
    maximal = iset.maximal_subsets()
    counts = {
        s: sum(1 for m in maximal if set(s) <= set(m)) for s in iset.subsets
    }
    return maximal, counts


def energy_terms(theta, iset):
    """Split a model-supported theta array into per-subset energy blocks.

    ``terms[S]`` is minus the prefix cumulative sum (starting at coordinate
    1) of the theta block whose free coordinates lie on S.

    Raises
    ------
    OffModelError
        If theta carries more than 1e-6 absolute mass at indices outside the
        basis of ``iset``.
    """
    if not isinstance(theta, CoordTensor) or theta.kind != THETA:
        raise ValueError("expected a CoordTensor of kind 'theta'")
    if not isinstance(iset, InteractionSet) or theta.values.ndim != iset.order:
        raise ShapeMismatchError("theta order does not match the interaction set")
    vals = theta.values
    ndim = vals.ndim

    on_model = np.zeros(vals.shape, dtype=bool)
    on_model[(0,) * ndim] = True
    for subset in iset.subsets:
        block = tuple(
            slice(1, None) if d in subset else 0 for d in range(ndim)
        )
        on_model[block] = True
    off = vals[~on_model]
    if off.size and float(np.abs(off).max()) > _OFF_MODEL_TOL:
        raise OffModelError(
            f"theta has mass {np.abs(off).max():g} outside the interaction set"
        )

    terms = {}
    for subset in iset.subsets:
        shape = tuple(vals.shape[d] for d in subset)
        block = vals[tuple(slice(1, None) if d in subset else 0 for d in range(ndim))]
        h = np.zeros(shape)
        if block.size:
            h[(slice(1, None),) * len(subset)] = -kernels.prefix_cumsum(block)
        terms[subset] = h
    return EnergyTerms(h0=-float(vals[(0,) * ndim]), terms=terms)


def extract_factors(result, iset):
    """Factor a converged projection result over the maximal subsets.

    Factor j collects ``exp(-H_S / c_S)`` over every member subset S inside
    maximal subset M_j (``c_S`` = number of maximal subsets covering S) and a
    ``Z**(-1/K)`` share of the partition function.
    """
    if not result.converged:
        raise NotConvergedError("factor extraction requires a converged projection")
    tensor = np.asarray(result.tensor, dtype=np.float64)
    scale = float(tensor.sum())
    theta = theta_from_tensor(tensor / scale)
    et = energy_terms(theta, iset)
    maximal, counts = covering_counts(iset)
    k = len(maximal)

    factors = []
    for msub in maximal:
        log_factor = np.full(tuple(tensor.shape[d] for d in msub), -et.h0 / k)
        for subset, h in et.terms.items():
            if set(subset) <= set(msub):
                axes = tuple(msub.index(d) for d in subset)
                log_factor -= _expand(h, axes, len(msub)) / counts[subset]
        factors.append(np.exp(log_factor))
    return FactorSet(
        subsets=tuple(maximal),
        factors=tuple(factors),
        z=math.exp(et.h0),
        scale=scale,
    )


def reconstruct_from_factors(fset, dims):
    """Broadcast elementwise product of the factors, times the stored scale."""
    dims = tuple(int(d) for d in dims)
    ndim = len(dims)
    out = np.ones(dims)
    for subset, factor in zip(fset.subsets, fset.factors):
        if any(d >= ndim for d in subset):
            raise ShapeMismatchError(f"subset {subset} outside a {ndim}-mode tensor")
        if factor.shape != tuple(dims[d] for d in subset):
            raise ShapeMismatchError(
                f"factor for {subset} has shape {factor.shape}, dims are {dims}"
            )
        out = out * _expand(factor, subset, ndim)
    return out * fset.scale


def export_ring_cores(fset):
    """Turn cyclic pair factors into tensor-ring cores.

    Requires the maximal subsets to be exactly the D neighbor pairs
    {d, d+1 mod D} of the mode cycle (D >= 3). Core d has shape
    ``(I_{d-1}, I_d, I_d)`` and is diagonal in its last two modes:
    ``core[r, i, i]`` holds the pair factor linking modes d-1 and d, so the
    ring contraction (:func:`manybody.tensor.ring_contract`) reproduces
    ``reconstruct_from_factors`` exactly and the ring rank is the dims tuple
    itself. The total-sum scale is folded in as ``scale**(1/D)`` per core.
    """
    pairs = list(fset.subsets)
    order = len(pairs)
    if order < 3 or any(len(s) != 2 for s in pairs):
        raise NotCyclicError("ring export needs >= 3 maximal pair subsets")
    expected = {tuple(sorted((d, (d + 1) % order))) for d in range(order)}
    if set(pairs) != expected:
        raise NotCyclicError(
            f"maximal pairs {sorted(pairs)} do not form the mode cycle of order {order}"
        )
    by_pair = dict(zip(pairs, fset.factors))
    sizes = {}
    for (a, b), factor in by_pair.items():
        for mode, size in zip((a, b), factor.shape):
            if sizes.setdefault(mode, size) != size:
                raise ShapeMismatchError(f"inconsistent sizes for mode {mode}")

    share = fset.scale ** (1.0 / order)
    cores = []
    for d in range(order):
        prev = (d - 1) % order
        key = tuple(sorted((prev, d)))
        factor = by_pair[key]
        linking = factor if key == (prev, d) else factor.T
        core = np.zeros((sizes[prev], sizes[d], sizes[d]))
        diag = np.arange(sizes[d])
        core[:, diag, diag] = linking * share
        cores.append(core)
    return cores


def ring_rank(cores):
    """Bond dimensions of a ring-core chain (the size of each trailing bond)."""
    return tuple(core.shape[2] for core in cores)


def save_factors(fset, directory):
    """Write one tensor file per factor plus a JSON manifest.

    The manifest records the maximal subsets (1-based modes, matching the
    CLI grammar), the partition function, the scale, and the file names.
    """
    from manybody.tensorfile import write_tensor

    os.makedirs(directory, exist_ok=True)
    names = []
    for subset, factor in zip(fset.subsets, fset.factors):
        name = "factor_" + "_".join(str(d + 1) for d in subset) + ".txt"
        write_tensor(os.path.join(directory, name), factor)
        names.append(name)
    manifest = {
        "subsets": [[d + 1 for d in subset] for subset in fset.subsets],
        "z": fset.z,
        "scale": fset.scale,
        "files": names,
    }
    with open(os.path.join(directory, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_factors(directory):
    """Inverse of :func:`save_factors`."""
    from manybody.tensorfile import read_tensor

    with open(os.path.join(directory, "manifest.json"), encoding="utf-8") as fh:
        manifest = json.load(fh)
    subsets = tuple(tuple(d - 1 for d in s) for s in manifest["subsets"])
    factors = tuple(
        read_tensor(os.path.join(directory, name)) for name in manifest["files"]
    )
    return FactorSet(
        subsets=subsets,
        factors=factors,
        z=float(manifest["z"]),
        scale=float(manifest["scale"]),
    )
