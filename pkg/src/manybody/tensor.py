"""Dense non-negative tensors: arithmetic, divergences, metrics, reshaping,
and synthetic ring-structured data.

A tensor is a plain C-ordered float64 ``numpy.ndarray`` with non-negative
entries; treated as a (possibly unnormalized) discrete distribution over its
index set. All functions here are pure: inputs are never mutated.
"""

from dataclasses import dataclass

import numpy as np

from manybody.errors import (
    EmptyMaskError,
    EmptyObservationError,
    InvalidTensorError,
    ShapeMismatchError,
    SizeMismatchError,
    SupportViolationError,
    ZeroTensorError,
)


def as_tensor(values, allow_nan=False):
    """Validate and coerce ``values`` into a dense non-negative tensor.

    Parameters
    ----------
    values : array_like
        Anything NumPy can turn into a float64 array of order >= 1.
    allow_nan : bool
        Permit NaN entries (used for completion inputs where NaN marks a
        missing value). Non-NaN entries must still be finite and >= 0.

    Returns
    -------
    ndarray
        C-contiguous float64 array.
    """
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim < 1 or arr.size == 0:
        raise InvalidTensorError("tensor must have order >= 1 and no empty mode")
    finite = np.isfinite(arr)
    if allow_nan:
        bad = ~finite & ~np.isnan(arr)
    else:
        bad = ~finite
    if bad.any():
        raise InvalidTensorError("tensor entries must be finite")
    vals = arr[finite]
    if vals.size and vals.min() < 0:
        raise InvalidTensorError("tensor entries must be non-negative")
    return arr


def total_sum(t):
    """Sum of all entries."""
    return float(as_tensor(t).sum())


def normalize(t):
    """Rescale ``t`` to unit total sum.

    Returns
    -------
    (ndarray, float)
        The normalized tensor and the original total sum, so that
        ``t == scale * normalized`` elementwise.

    Raises
    ------
    ZeroTensorError
        If the total sum is zero.
    """
    arr = as_tensor(t)
    s = float(arr.sum())
    if s <= 0.0:
        raise ZeroTensorError("cannot normalize a tensor with zero total sum")
    return arr / s, s


def kl_divergence(p, q):
    """Generalized KL divergence sum(p * log(p / q) - p + q).

    Uses the convention 0 * log 0 = 0. Reduces to the ordinary discrete KL
    divergence when both tensors have the same total sum, and handles
    unnormalized inputs without any precondition on totals.

    Raises
    ------
    ShapeMismatchError
        If the shapes differ.
    SupportViolationError
        If p > 0 somewhere q = 0.
    """
    pa = as_tensor(p)
    qa = as_tensor(q)
    if pa.shape != qa.shape:
        raise ShapeMismatchError(f"shape {pa.shape} vs {qa.shape}")
    support = pa > 0
    if np.any(qa[support] == 0):
        raise SupportViolationError("q vanishes on the support of p")
    ps = pa[support]
    val = float(np.sum(ps * (np.log(ps) - np.log(qa[support]))) - pa.sum() + qa.sum())
    # each term is >= 0 analytically; clip float noise
    return max(val, 0.0)


def relative_error(truth, approx):
    """Frobenius-norm ratio ||truth - approx||_F / ||truth||_F."""
    ta = as_tensor(truth)
    aa = as_tensor(approx)
    if ta.shape != aa.shape:
        raise ShapeMismatchError(f"shape {ta.shape} vs {aa.shape}")
    denom = float(np.linalg.norm(ta))
    if denom == 0.0:
        raise ZeroTensorError("relative error undefined for a zero truth tensor")
    return float(np.linalg.norm(ta - aa)) / denom


def recovery_fit(truth, approx, missing):
    """Fit score on the missing entries: 1 - ||t - a||_F / ||t||_F over the mask.

    Parameters
    ----------
    missing : boolean array_like
        True at the entries to score (the hidden/missing index set).
    """
    ta = as_tensor(truth)
    aa = as_tensor(approx)
    mask = np.asarray(missing, dtype=bool)
    if ta.shape != aa.shape or mask.shape != ta.shape:
        raise ShapeMismatchError("truth, approx and mask must share one shape")
    if not mask.any():
        raise EmptyMaskError("mask selects no entries")
    tm = ta[mask]
    denom = float(np.linalg.norm(tm))
    if denom == 0.0:
        raise ZeroTensorError("recovery fit undefined: truth vanishes on the mask")
    return 1.0 - float(np.linalg.norm(tm - aa[mask])) / denom


def reshape(t, new_dims):
    """Relabel indices: same flat row-major values under new dims."""
    arr = as_tensor(t)
    dims = tuple(int(d) for d in new_dims)
    if any(d < 1 for d in dims):
        raise SizeMismatchError("new dims must be positive")
    if int(np.prod(dims)) != arr.size:
        raise SizeMismatchError(f"cannot reshape {arr.size} entries into {dims}")
    return arr.reshape(dims).copy()


def ring_contract(cores):
    """Contract a cyclic chain of order-3 cores into a dense tensor.

    ``cores[d]`` has shape ``(R_{d-1}, I_d, R_d)`` with the bond of the last
    core wrapping around to the first (``R_0 = R_D``). Returns the
    ``(I_1, ..., I_D)`` tensor obtained by summing the matrix chain over all
    bond indices and tracing the wrap-around bond.
    """
    acc = np.asarray(cores[0], dtype=np.float64)
    for core in cores[1:]:
        acc = np.tensordot(acc, np.asarray(core, dtype=np.float64), axes=(acc.ndim - 1, 0))
    return np.ascontiguousarray(np.trace(acc, axis1=0, axis2=acc.ndim - 1))


def random_ring_tensor(dims, ring_ranks, seed=0):
    """Dense tensor contracted from uniformly-sampled ring cores.

    Core ``d`` has shape ``(R_{d-1}, I_d, R_d)`` with entries i.i.d. uniform
    on (0, 1) drawn from a ``numpy.random.default_rng(seed)`` stream, so the
    result is deterministic per seed and strictly positive.
    """
    dims = tuple(int(d) for d in dims)
    ranks = tuple(int(r) for r in ring_ranks)
    if len(ranks) != len(dims):
        raise ShapeMismatchError("need one ring rank per mode")
    if any(d < 1 for d in dims) or any(r < 1 for r in ranks):
        raise InvalidTensorError("dims and ring ranks must be >= 1")
    rng = np.random.default_rng(seed)
    cores = [rng.random((ranks[d - 1], dims[d], ranks[d])) for d in range(len(dims))]
    return ring_contract(cores)


@dataclass(frozen=True)
class MaskedTensor:
    """A tensor with missing entries: NaN values plus an explicit mask.

    ``observed`` is True where the entry is known; observed entries must be
    finite and non-negative, and at least one entry must be observed.
    """

    values: np.ndarray
    observed: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        obs = np.ascontiguousarray(self.observed, dtype=bool)
        if vals.shape != obs.shape:
            raise ShapeMismatchError("values and observed mask must share one shape")
        if not obs.any():
            raise EmptyObservationError("no observed entries")
        seen = vals[obs]
        if not np.isfinite(seen).all() or seen.min() < 0:
            raise InvalidTensorError("observed entries must be finite and non-negative")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "observed", obs)

    @classmethod
    def from_values(cls, values):
        """Build from an array where NaN marks the missing entries."""
        arr = as_tensor(values, allow_nan=True)
        return cls(arr, ~np.isnan(arr))

    @property
    def missing(self):
        return ~self.observed

    @property
    def dims(self):
        return self.values.shape
