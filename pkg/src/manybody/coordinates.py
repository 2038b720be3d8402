"""Dual coordinate systems of a normalized tensor: natural parameters
(theta) and expectation parameters (eta).

A normalized strictly positive tensor P, its theta array and its eta array
determine each other bijectively:

* ``log P`` is the prefix cumulative sum of theta along every mode, with the
  entry at index (0, ..., 0) acting as the log-normalizer;
* eta is the suffix cumulative sum of P along every mode, so
  ``eta[0, ..., 0] == 1``.

The inverse maps are the per-mode difference operators. These separable
sweeps are an O(N * D) realization of the zeta/Moebius transform pair on the
product-of-chains index lattice; a direct recursive Moebius evaluation is
kept in the test suite as an independent cross-check.
"""

from dataclasses import dataclass

import numpy as np

from manybody import kernels
from manybody.errors import (
    InvalidEtaError,
    LogDomainOverflowError,
    NotNormalizedError,
    ZeroEntryError,
)
from manybody.tensor import as_tensor

THETA = "theta"
ETA = "eta"

_NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class CoordTensor:
    """A full parameter array tagged by its coordinate kind.

    ``kind`` is ``"theta"`` or ``"eta"``; ``values`` has the same shape as
    the tensor it describes. For eta the entry at (0, ..., 0) is 1 and
    entries are non-increasing along every mode; for theta the entry at
    (0, ..., 0) is the log-normalizer.
    """

    kind: str
    values: np.ndarray

    def __post_init__(self):
        if self.kind not in (THETA, ETA):
            raise ValueError(f"kind must be {THETA!r} or {ETA!r}, got {self.kind!r}")
        object.__setattr__(
            self, "values", np.ascontiguousarray(self.values, dtype=np.float64)
        )

    @property
    def dims(self):
        return self.values.shape


def _require_kind(coord, kind):
    if not isinstance(coord, CoordTensor) or coord.kind != kind:
        raise ValueError(f"expected a CoordTensor of kind {kind!r}")


def _require_normalized(arr):
    s = float(arr.sum())
    if abs(s - 1.0) > _NORMALIZATION_TOL:
        raise NotNormalizedError(f"tensor sums to {s!r}, expected 1")
    return s


def eta_from_tensor(p):
    """Expectation parameters of a normalized tensor.

    ``eta[i] = sum(p[j] for j >= i componentwise)``, computed by suffix
    cumulative sums along each mode. Zeros in ``p`` are fine.
    """
    arr = as_tensor(p)
    s = _require_normalized(arr)
    return CoordTensor(ETA, kernels.suffix_cumsum(arr / s))


def tensor_from_eta(e):
    """Invert :func:`eta_from_tensor` by per-mode forward differencing.

    ``p[i] = sum of (-1)^|offset| eta[i + offset]`` over 0/1 offsets, with
    eta treated as 0 past the last index of each mode.

    Raises
    ------
    InvalidEtaError
        If a reconstructed entry falls below -1e-9 (the array was not a
        valid expectation parameterization).
    """
    _require_kind(e, ETA)
    out = e.values
    for ax in range(out.ndim):
        out = -np.diff(out, axis=ax, append=0.0)
    if float(out.min()) < -1e-9:
        raise InvalidEtaError(f"reconstructed entry {out.min()!r} is negative")
    return np.maximum(out, 0.0)


def theta_from_tensor(p):
    """Natural parameters of a normalized strictly positive tensor.

    Per-mode backward differencing of ``log p`` with an implicit 0 boundary
    before the first index of each mode; the entry at (0, ..., 0) equals
    ``log p[0, ..., 0]``.
    """
    arr = as_tensor(p)
    s = _require_normalized(arr)
    if np.any(arr == 0):
        raise ZeroEntryError("natural parameters undefined for zero entries")
    out = np.log(arr / s)
    for ax in range(out.ndim):
        out = np.diff(out, axis=ax, prepend=0.0)
    return CoordTensor(THETA, out)


def decode_theta_array(theta_values):
    """Raw decode: full theta array -> normalized strictly positive tensor.

    Log-values are the prefix cumulative sums of theta; normalization happens
    in the log domain (max-subtracted log-sum-exp), so the entry at
    (0, ..., 0) only shifts the normalizer.
    """
    logq = kernels.prefix_cumsum(theta_values)
    if not np.isfinite(logq).all():
        raise LogDomainOverflowError("cumulative log-values are not finite")
    m = float(logq.max())
    norm = m + np.log(np.sum(np.exp(logq - m)))
    if not np.isfinite(norm):
        raise LogDomainOverflowError("log-normalizer is not finite")
    q = np.exp(logq - norm)
    q /= q.sum()
    return q


def tensor_from_theta(t):
    """Tensor described by natural parameters; always normalized.

    The free parameters may be any finite values; the entry at (0, ..., 0)
    is absorbed by normalization, and the output is strictly positive with
    unit total sum.
    """
    _require_kind(t, THETA)
    return decode_theta_array(t.values)
