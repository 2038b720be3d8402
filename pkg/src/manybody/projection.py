"""Convex KL projection onto an interaction-constrained log-linear family.

Given a non-negative tensor P and an interaction set, find the tensor Q in
the family (natural parameters free exactly on the set's basis, zero
elsewhere) minimizing the KL divergence from P. The family is log-linear,
the objective is convex, and the minimizer is unique; it is characterized by
moment matching: the expectation parameters of Q agree with those of P on
every basis index.

The solver is a Newton / natural-gradient iteration on the free natural
parameters: each step solves ``G @ delta = eta_b(Q) - eta_b(P)`` with the
Fisher information matrix ``G[u, v] = eta[max(u, v)] - eta_u * eta_v`` and
updates ``theta_b -= delta``. Inputs are normalized up front and the result
rescaled, so unnormalized tensors are handled transparently.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from manybody import kernels
from manybody.coordinates import ETA, CoordTensor, decode_theta_array
from manybody.errors import (
    LogDomainOverflowError,
    ShapeMismatchError,
    SingularSystemError,
    ZeroTensorError,
)
from manybody.interactions import InteractionSet, enumerate_basis, m_body_set
from manybody.tensor import as_tensor, kl_divergence

_DAMPING_RETRIES = 5
_MAX_STEP_HALVINGS = 20


@dataclass
class SolverOptions:
    """Newton solver knobs.

    ``tolerance`` bounds the Euclidean norm of the expectation-parameter
    residual at termination; ``damping`` is an optional Tikhonov term added
    to the Fisher matrix up front (an escalating ladder is applied
    automatically when the factorization fails).
    """

    tolerance: float = 1e-5
    max_iterations: int = 100
    damping: float = 0.0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.damping < 0:
            raise ValueError("damping must be >= 0")


@dataclass
class ProjectionResult:
    """Outcome of a projection.

    ``tensor`` has the same total sum as the input and is strictly positive;
    ``theta_b`` / ``eta_b`` are the free natural / expectation parameters of
    the output in basis order; ``kl`` is the generalized KL divergence from
    the input to the output. A non-converged run carries the best iterate
    seen with ``converged=False`` rather than raising.
    """

    tensor: np.ndarray
    theta_b: np.ndarray
    eta_b: np.ndarray
    kl: float
    iterations: int
    converged: bool
    basis: np.ndarray = field(repr=False, default=None)


def fisher_matrix(eta_full, basis):
    """Fisher information matrix over a basis of free parameters.

    Parameters
    ----------
    eta_full : CoordTensor
        Full expectation-parameter tensor (kind ``"eta"``).
    basis : (n, D) integer array
        Zero-based multi-indices, e.g. from :func:`enumerate_basis`.
    """
    if not isinstance(eta_full, CoordTensor) or eta_full.kind != ETA:
        raise ValueError("expected a CoordTensor of kind 'eta'")
    vals = eta_full.values
    idx = np.ascontiguousarray(basis, dtype=np.intp)
    if idx.ndim != 2 or idx.shape[1] != vals.ndim:
        raise ShapeMismatchError("basis rows must match the tensor order")
    flat = np.ravel_multi_index(idx.T, vals.shape)
    return kernels.fisher_matrix(vals, idx, vals.ravel()[flat])


def _solve_newton_system(G, residual, base_damping):
    """Solve ``G @ delta = residual`` by Cholesky, escalating Tikhonov
    damping on failure, up to the retry budget."""
    n = G.shape[0]
    eye = np.eye(n)
    attempts = [base_damping]
    gnorm = float(np.linalg.norm(G, np.inf)) if n else 0.0
    attempts += [1e-10 * gnorm * 10.0**k for k in range(_DAMPING_RETRIES)]
    for lam in attempts:
        try:
            cho = scipy.linalg.cho_factor(G + lam * eye if lam else G)
            delta = scipy.linalg.cho_solve(cho, residual)
        except scipy.linalg.LinAlgError:
            continue
        if np.isfinite(delta).all():
            return delta
    raise SingularSystemError("Fisher matrix unsolvable after the damping ladder")


def _kl_on_support(p, q, support):
    ps = p[support]
    qs = q[support]
    if np.any(qs <= 0):
        return math.inf
    return float(np.sum(ps * (np.log(ps) - np.log(qs))))


def project(p, iset, opts=None, theta0=None):
    """Project ``p`` onto the family defined by ``iset``.

    Zeros in ``p`` are allowed (only its expectation parameters are used);
    the output is strictly positive with the same total sum as the input.
    If the iteration budget runs out the best iterate is returned with
    ``converged=False`` instead of raising.

    Parameters
    ----------
    theta0 : (n,) array, optional
        Starting free natural parameters (defaults to all zeros, i.e. the
        uniform tensor). Exists to exercise uniqueness of the optimum; the
        zero start is always fine.
    """
    opts = opts if opts is not None else SolverOptions()
    arr = as_tensor(p)
    if not isinstance(iset, InteractionSet):
        raise TypeError("iset must be an InteractionSet")
    if arr.ndim != iset.order:
        raise ShapeMismatchError(
            f"tensor order {arr.ndim} vs interaction order {iset.order}"
        )
    scale = float(arr.sum())
    if scale <= 0.0:
        raise ZeroTensorError("cannot project a tensor with zero total sum")
    target = arr / scale
    dims = arr.shape

    basis = enumerate_basis(iset, dims)
    n = basis.shape[0]
    flat_idx = np.ravel_multi_index(basis.T, dims) if n else np.empty(0, dtype=np.intp)
    eta_hat = kernels.suffix_cumsum(target).ravel()[flat_idx]
    support = target > 0

    theta_b = np.zeros(n) if theta0 is None else np.array(theta0, dtype=np.float64)
    if theta_b.shape != (n,):
        raise ShapeMismatchError(f"theta0 must have shape ({n},)")

    def decode(vec):
        full = np.zeros(dims)
        full.ravel()[flat_idx] = vec
        return decode_theta_array(full)

    q = decode(theta_b)
    kl_cur = _kl_on_support(target, q, support)
    best = None
    converged = False
    iterations = 0

    for iterations in range(1, opts.max_iterations + 1):
        eta_full = kernels.suffix_cumsum(q)
        eta_b = eta_full.ravel()[flat_idx]
        residual = eta_b - eta_hat
        rnorm = float(np.linalg.norm(residual))
        if best is None or rnorm < best[0]:
            best = (rnorm, q, theta_b, eta_b)
        if rnorm < opts.tolerance:
            converged = True
            break

        G = kernels.fisher_matrix(eta_full, basis, eta_b)
        delta = _solve_newton_system(G, residual, opts.damping)

        # pure Newton step; halve only if the KL objective moves the wrong way
        step = 1.0
        accepted = False
        for _ in range(_MAX_STEP_HALVINGS + 1):
            cand = theta_b - step * delta
            try:
                q_cand = decode(cand)
                kl_cand = _kl_on_support(target, q_cand, support)
            except LogDomainOverflowError:
                kl_cand = math.inf
            if kl_cand <= kl_cur + 1e-12:
                accepted = True
                break
            step *= 0.5
        if not accepted and not math.isfinite(kl_cand):
            continue  # stay at the current iterate; budget keeps this finite
        theta_b, q, kl_cur = cand, q_cand, kl_cand

    if not converged:
        _, q, theta_b, eta_b = best

    out = q * scale
    return ProjectionResult(
        tensor=out,
        theta_b=np.asarray(theta_b, dtype=np.float64),
        eta_b=np.asarray(eta_b, dtype=np.float64),
        kl=kl_divergence(arr, out),
        iterations=iterations,
        converged=converged,
        basis=basis,
    )


def m_body_approximation(p, m, opts=None):
    """Projection onto the family keeping interactions of at most ``m`` modes."""
    arr = as_tensor(p)
    return project(arr, m_body_set(arr.ndim, m), opts)
