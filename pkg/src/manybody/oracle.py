"""Independent brute-force verifier: iterative proportional fitting.

For a downward-closed interaction set, repeatedly rescaling a tensor so that
its marginal over each maximal subset matches the target's converges to the
same unique KL minimizer as the Newton projection, without touching any of
its machinery: no coordinate transforms, no Fisher matrix, no linear solves.
Ordinary subset marginals replace expectation-parameter matching; for
downward-closed families the two conditions coincide because expectation
parameters on the basis are partial cumulative sums of subset marginals.

Reference implementation by design: single-threaded, clarity over speed,
meant for instances up to a few thousand entries.
"""

from dataclasses import dataclass

import numpy as np

from manybody.errors import BadModesError, NotConvergedError, NotNormalizedError
from manybody.interactions import InteractionSet
from manybody.tensor import as_tensor


@dataclass
class OracleOptions:
    """``tolerance`` bounds the max absolute marginal discrepancy."""

    tolerance: float = 1e-10
    max_sweeps: int = 10000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")


def marginal(p, modes):
    """Sum ``p`` over every mode not in ``modes``.

    The result's axes follow the sorted member modes.
    """
    arr = as_tensor(p)
    kept = tuple(sorted(set(int(d) for d in modes)))
    if not kept:
        raise BadModesError("modes must be nonempty")
    if kept[0] < 0 or kept[-1] >= arr.ndim:
        raise BadModesError(f"modes {kept} outside 0..{arr.ndim - 1}")
    drop = tuple(ax for ax in range(arr.ndim) if ax not in kept)
    return arr.sum(axis=drop) if drop else arr.copy()


def _broadcast(arr, modes, ndim):
    shape = [1] * ndim
    for ax, d in enumerate(modes):
        shape[d] = arr.shape[ax]
    return arr.reshape(shape)


def ipf_project(p, iset, opts=None):
    """KL projection by marginal scaling, from the uniform start.

    ``p`` must be normalized (total sum 1 within 1e-9). Sweeps the maximal
    subsets in lexicographic order, each time multiplying the iterate by the
    ratio of target to current marginal; stops once every maximal-subset
    marginal matches the target's within tolerance.

    Raises
    ------
    NotConvergedError
        After ``max_sweeps`` full sweeps.
    """
    opts = opts if opts is not None else OracleOptions()
    arr = as_tensor(p)
    if not isinstance(iset, InteractionSet) or arr.ndim != iset.order:
        raise BadModesError("interaction set order must match the tensor order")
    if abs(float(arr.sum()) - 1.0) > 1e-9:
        raise NotNormalizedError("IPF expects a normalized tensor")

    maximal = iset.maximal_subsets()
    targets = {subset: marginal(arr, subset) for subset in maximal}
    ndim = arr.ndim
    q = np.full(arr.shape, 1.0 / arr.size)

    for _ in range(opts.max_sweeps):
        for subset in maximal:
            cur = marginal(q, subset)
            ratio = np.divide(
                targets[subset], cur, out=np.zeros_like(cur), where=cur > 0
            )
            q = q * _broadcast(ratio, subset, ndim)
        worst = max(
            float(np.abs(marginal(q, subset) - targets[subset]).max())
            for subset in maximal
        )
        if worst < opts.tolerance:
            return q
    raise NotConvergedError(
        f"marginals still off by {worst:g} after {opts.max_sweeps} sweeps"
    )
