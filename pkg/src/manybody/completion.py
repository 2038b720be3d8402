"""Tensor completion by alternating projection and observation restore.

Missing entries are initialized, then the loop alternates an m-step (project
the full tensor onto the interaction family) with an e-step (overwrite the
observed entries with their known values). Observed entries of the result
are therefore bit-identical to the input. The relative Frobenius change
between consecutive iterates is recorded per iteration; the loop stops once
two consecutive residuals differ by less than ``epsilon``, never before the
third iteration.

Each step individually has a unique destination (the projection by convexity
of the family, the restore trivially), but the alternation as a whole is
non-convex, so runs record seed and init for reproducibility and callers may
restart.
"""

from dataclasses import dataclass

import numpy as np

from manybody.errors import SpecParseError
from manybody.interactions import InteractionSet
from manybody.projection import SolverOptions, project
from manybody.tensor import MaskedTensor

_MIN_FILL = 1e-12


@dataclass
class CompletionOptions:
    """Completion knobs.

    ``init`` is one of ``"observed-mean"`` (default), ``"gaussian:MEAN,STD"``
    or ``"const:C"``; ``seed`` feeds the Gaussian draw. Deterministic inits
    ignore the seed.
    """

    epsilon: float = 1e-5
    max_iterations: int = 500
    init: str = "observed-mean"
    seed: int | None = None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        parse_init(self.init)


@dataclass
class CompletionResult:
    """Completed tensor plus the per-iteration residual trace."""

    tensor: np.ndarray
    residual_trace: list
    iterations: int
    converged: bool


def parse_init(text):
    """Parse an init specification into a (kind, *params) tuple."""
    if not isinstance(text, str) or not text.strip():
        raise SpecParseError("empty init specification")
    body = text.strip()
    if body == "observed-mean":
        return ("observed-mean",)
    if body.startswith("gaussian:"):
        parts = body[len("gaussian:"):].split(",")
        if len(parts) != 2:
            raise SpecParseError("expected gaussian:MEAN,STD", len("gaussian:"))
        try:
            mean, std = float(parts[0]), float(parts[1])
        except ValueError:
            raise SpecParseError("gaussian parameters must be numbers", len("gaussian:"))
        if std < 0:
            raise SpecParseError("gaussian std must be >= 0", len("gaussian:"))
        return ("gaussian", mean, std)
    if body.startswith("const:"):
        try:
            value = float(body[len("const:"):])
        except ValueError:
            raise SpecParseError("expected const:VALUE", len("const:"))
        if not value > 0:
            raise SpecParseError("const init must be > 0", len("const:"))
        return ("const", value)
    raise SpecParseError(f"unrecognized init {body!r}")


def _initial_fill(masked, opts):
    kind = parse_init(opts.init)
    values = np.where(masked.observed, masked.values, 0.0)
    n_missing = int(masked.missing.sum())
    if kind[0] == "observed-mean":
        fill = float(masked.values[masked.observed].mean())
    elif kind[0] == "gaussian":
        rng = np.random.default_rng(opts.seed)
        fill = rng.normal(kind[1], kind[2], size=n_missing)
    else:
        fill = kind[1]
    values[masked.missing] = np.maximum(fill, _MIN_FILL)
    return values


def lbtc(masked, iset, solver_opts=None, opts=None):
    """Complete a masked tensor by alternating projection and restore.

    Parameters
    ----------
    masked : MaskedTensor
        Input with at least one observed entry.
    iset : InteractionSet
        Family to project onto in the m-step.
    solver_opts : SolverOptions, optional
        Inner projection knobs (shared by every m-step).
    opts : CompletionOptions, optional

    Returns
    -------
    CompletionResult
        ``converged`` is False if either the residual criterion was not met
        within the iteration budget or some inner projection failed to
        converge (its best iterate is still used).
    """
    if not isinstance(masked, MaskedTensor):
        masked = MaskedTensor.from_values(masked)
    opts = opts if opts is not None else CompletionOptions()
    solver_opts = solver_opts if solver_opts is not None else SolverOptions()
    if not isinstance(iset, InteractionSet):
        raise TypeError("iset must be an InteractionSet")

    observed = masked.observed
    known = masked.values[observed]
    if observed.all():
        return CompletionResult(masked.values.copy(), [], 0, True)

    current = _initial_fill(masked, opts)
    current[observed] = known

    trace = []
    converged = False
    inner_ok = True
    for _ in range(opts.max_iterations):
        result = project(current, iset, solver_opts)
        inner_ok = inner_ok and result.converged
        nxt = result.tensor
        nxt[observed] = known
        res = float(np.linalg.norm(nxt - current) / np.linalg.norm(current))
        trace.append(res)
        current = nxt
        if len(trace) > 2 and abs(trace[-1] - trace[-2]) < opts.epsilon:
            converged = True
            break
    return CompletionResult(current, trace, len(trace), converged and inner_ok)
