"""Interaction sets: which groups of modes may carry joint energy terms.

An :class:`InteractionSet` is a downward-closed family of nonempty mode
subsets that always contains every singleton. A natural parameter whose
index has its non-zero coordinates (0-based) exactly on a member subset is
free; all other parameters are pinned to 0. Modes are 0-based axes in the
API; the text grammar for the CLI uses 1-based modes.
"""

import itertools
import re
from dataclasses import dataclass

import numpy as np

from manybody.errors import (
    BadModesError,
    BadOrderError,
    ModeOutOfRangeError,
    SpecParseError,
)


@dataclass(frozen=True)
class InteractionSet:
    """Downward-closed family of mode subsets over ``order`` modes.

    ``subsets`` may be passed in any order and un-closed; construction
    normalizes: modes validated against ``order``, downward closure taken,
    singletons added, duplicates removed, and the family stored as a
    lexicographically sorted tuple of sorted tuples.
    """

    order: int
    subsets: tuple = ()

    def __post_init__(self):
        order = int(self.order)
        if order < 1:
            raise BadOrderError(f"order must be >= 1, got {order}")
        closed = set()
        for subset in self.subsets:
            modes = tuple(sorted(set(int(d) for d in subset)))
            if not modes:
                raise BadModesError("interaction subsets must be nonempty")
            if modes[0] < 0 or modes[-1] >= order:
                raise ModeOutOfRangeError(f"modes {modes} outside 0..{order - 1}")
            for n in range(1, len(modes) + 1):
                closed.update(itertools.combinations(modes, n))
        closed.update((d,) for d in range(order))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "subsets", tuple(sorted(closed)))

    def __contains__(self, subset):
        return tuple(sorted(subset)) in set(self.subsets)

    def maximal_subsets(self):
        """Members not strictly contained in another member, lex sorted."""
        families = [set(s) for s in self.subsets]
        return [
            s for s in self.subsets if not any(set(s) < other for other in families)
        ]

    def is_subfamily_of(self, other):
        return self.order == other.order and set(self.subsets) <= set(other.subsets)


def m_body_set(order, m):
    """All subsets of at most ``m`` modes."""
    order = int(order)
    m = int(m)
    if order < 1:
        raise BadOrderError(f"order must be >= 1, got {order}")
    if m < 1 or m > order:
        raise BadOrderError(f"m must be in 1..{order}, got {m}")
    subsets = [
        combo
        for n in range(1, m + 1)
        for combo in itertools.combinations(range(order), n)
    ]
    return InteractionSet(order, tuple(subsets))


def cyclic_set(order):
    """Singletons plus the neighbor pairs {d, d+1} on the mode cycle."""
    order = int(order)
    if order < 2:
        raise BadOrderError(f"cyclic interactions need order >= 2, got {order}")
    pairs = [tuple(sorted((d, (d + 1) % order))) for d in range(order)]
    return InteractionSet(order, tuple(pairs))


_TUPLE_RE = re.compile(r"\(\s*(\d+)\s*((?:,\s*\d+\s*)+)\)")


def _parse_tuple_clause(text, start, stop, order, out):
    pos = start
    while pos < stop:
        if text[pos].isspace():
            pos += 1
            continue
        match = _TUPLE_RE.match(text, pos)
        if match is None or match.end() > stop:
            raise SpecParseError("expected a tuple like (1,2)", pos)
        modes_1based = [int(match.group(1))]
        modes_1based += [int(tok) for tok in match.group(2).replace(",", " ").split()]
        for mode in modes_1based:
            if mode < 1 or mode > order:
                raise ModeOutOfRangeError(
                    f"mode {mode} outside 1..{order} (at position {pos})"
                )
        if len(set(modes_1based)) != len(modes_1based):
            raise SpecParseError("repeated mode inside a tuple", pos)
        out.append(tuple(sorted(m - 1 for m in modes_1based)))
        pos = match.end()


def parse_spec(text, order):
    """Parse an interaction specification string against a tensor order.

    Grammar: clauses joined by ``;``, each clause one of ``body=M``,
    ``cyclic``, or a run of tuples ``(i,j,...)`` of 1-based modes with at
    least two entries. The union of all clauses is closed downward and
    completed with singletons.
    """
    if not isinstance(text, str):
        raise SpecParseError("specification must be a string")
    if not text.strip():
        raise SpecParseError("empty specification")
    order = int(order)
    if order < 1:
        raise BadOrderError(f"order must be >= 1, got {order}")

    subsets = []
    offset = 0
    for clause in text.split(";"):
        body = clause.strip()
        lead = offset + (len(clause) - len(clause.lstrip()))
        if not body:
            raise SpecParseError("empty clause", lead)
        if body.startswith("body="):
            value = body[len("body="):].strip()
            if not value.isdigit():
                raise SpecParseError("expected an integer after 'body='", lead + 5)
            subsets.extend(m_body_set(order, int(value)).subsets)
        elif body == "cyclic":
            subsets.extend(cyclic_set(order).subsets)
        elif body.startswith("("):
            _parse_tuple_clause(text, lead, lead + len(body), order, subsets)
        else:
            raise SpecParseError(f"unrecognized clause {body!r}", lead)
        offset += len(clause) + 1
    return InteractionSet(order, tuple(subsets))


def enumerate_basis(iset, dims):
    """Multi-indices of the free parameters, excluding the normalizer.

    For every member subset S, emits all 0-based indices with coordinates in
    1..I_d-1 on S and 0 elsewhere. Rows are lexicographically sorted and
    duplicate-free; the all-zeros index (the normalizer) is never included.

    Returns
    -------
    (n, D) ndarray of intp
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) != iset.order:
        raise BadOrderError(
            f"interaction set has order {iset.order}, dims have {len(dims)}"
        )
    if any(d < 1 for d in dims):
        raise BadOrderError("dims must be positive")
    rows = []
    for subset in iset.subsets:
        for combo in itertools.product(*(range(1, dims[d]) for d in subset)):
            idx = [0] * iset.order
            for d, v in zip(subset, combo):
                idx[d] = v
            rows.append(tuple(idx))
    rows.sort()
    return np.array(rows, dtype=np.intp).reshape(len(rows), iset.order)


def count_parameters(iset, dims):
    """Number of model parameters including the normalizer.

    ``1 + sum over member subsets S of prod(I_d - 1 for d in S)``; always
    equals ``1 + len(enumerate_basis(iset, dims))``.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) != iset.order:
        raise BadOrderError(
            f"interaction set has order {iset.order}, dims have {len(dims)}"
        )
    if any(d < 1 for d in dims):
        raise BadOrderError("dims must be positive")
    total = 1
    for subset in iset.subsets:
        block = 1
        for d in subset:
            block *= dims[d] - 1
        total += block
    return total
