import itertools

import numpy as np
import pytest

from manybody import (
    InteractionSet,
    count_parameters,
    cyclic_set,
    enumerate_basis,
    m_body_set,
    parse_spec,
)
from manybody.errors import (
    BadOrderError,
    ModeOutOfRangeError,
    SpecParseError,
)


def subsets_of(iset):
    return set(iset.subsets)


def test_m_body_examples():
    assert subsets_of(m_body_set(3, 1)) == {(0,), (1,), (2,)}
    two = m_body_set(4, 2)
    assert subsets_of(two) == {(d,) for d in range(4)} | set(
        itertools.combinations(range(4), 2)
    )
    full = m_body_set(3, 3)
    assert subsets_of(full) == {
        s
        for n in range(1, 4)
        for s in itertools.combinations(range(3), n)
    }
    with pytest.raises(BadOrderError):
        m_body_set(3, 0)
    with pytest.raises(BadOrderError):
        m_body_set(3, 4)


def test_cyclic_examples():
    assert subsets_of(cyclic_set(4)) == {(0,), (1,), (2,), (3,), (0, 1), (1, 2), (2, 3), (0, 3)}
    assert subsets_of(cyclic_set(2)) == subsets_of(m_body_set(2, 2))
    assert subsets_of(cyclic_set(3)) == subsets_of(m_body_set(3, 2))
    with pytest.raises(BadOrderError):
        cyclic_set(1)


def test_interaction_set_normalization_and_closure():
    iset = InteractionSet(4, ((2, 0, 3),))
    assert (0, 2, 3) in iset
    assert (0, 2) in iset and (2, 3) in iset and (0, 3) in iset
    assert (1,) in iset  # singleton completion
    # idempotent
    again = InteractionSet(4, iset.subsets)
    assert again.subsets == iset.subsets
    with pytest.raises(ModeOutOfRangeError):
        InteractionSet(3, ((0, 3),))


def test_maximal_subsets():
    iset = InteractionSet(4, ((0, 1, 2), (0, 3)))
    assert iset.maximal_subsets() == [(0, 1, 2), (0, 3)]
    assert cyclic_set(3).maximal_subsets() == [(0, 1), (0, 2), (1, 2)]


def test_nesting_relations():
    for order in (3, 4, 5):
        for m in range(1, order):
            assert m_body_set(order, m).is_subfamily_of(m_body_set(order, m + 1))
        assert cyclic_set(order).is_subfamily_of(m_body_set(order, 2))


def test_parse_spec_keywords():
    assert subsets_of(parse_spec("cyclic", 4)) == subsets_of(cyclic_set(4))
    assert subsets_of(parse_spec("body=2", 4)) == subsets_of(m_body_set(4, 2))
    assert subsets_of(parse_spec("body=1; (1,2)", 3)) == subsets_of(
        InteractionSet(3, ((0, 1),))
    )


def test_parse_spec_tuples_with_closure():
    iset = parse_spec("(1,2)(1,3)(1,4)(2,4)(1,2,3)", 4)
    expected = {
        (0,), (1,), (2,), (3,),
        (0, 1), (0, 2), (0, 3), (1, 3), (1, 2),  # (2,3) 1-based comes from closure
        (0, 1, 2),
    }
    assert subsets_of(iset) == expected


def test_parse_spec_whitespace_and_dedup():
    a = parse_spec(" ( 1 , 2 ) ; body=1 ; (1,2)", 3)
    b = parse_spec("(1,2)", 3)
    assert a.subsets == b.subsets


def test_parse_spec_errors_carry_positions():
    with pytest.raises(SpecParseError):
        parse_spec("", 3)
    with pytest.raises(SpecParseError) as err:
        parse_spec("bogus", 3)
    assert err.value.position == 0
    with pytest.raises(SpecParseError) as err:
        parse_spec("body=1; nope", 3)
    assert err.value.position == 8
    with pytest.raises(SpecParseError):
        parse_spec("body=x", 3)
    with pytest.raises(SpecParseError):
        parse_spec("(1)", 3)  # tuples need at least two modes
    with pytest.raises(SpecParseError):
        parse_spec("(1,1)", 3)
    with pytest.raises(ModeOutOfRangeError):
        parse_spec("(1,5)", 3)
    with pytest.raises(BadOrderError):
        parse_spec("cyclic", 1)
    with pytest.raises(BadOrderError):
        parse_spec("body=4", 3)


def test_enumerate_basis_examples():
    full = m_body_set(2, 2)
    rows = enumerate_basis(full, (2, 2))
    assert [tuple(r) for r in rows] == [(0, 1), (1, 0), (1, 1)]

    one = m_body_set(3, 1)
    rows = enumerate_basis(one, (2, 2, 2))
    assert [tuple(r) for r in rows] == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]

    rows = enumerate_basis(cyclic_set(3), (2, 2, 2))
    assert rows.shape == (6, 3)


def test_enumerate_basis_sorted_unique():
    rng = np.random.default_rng(0)
    for _ in range(10):
        order = int(rng.integers(2, 5))
        dims = tuple(int(d) for d in rng.integers(1, 5, order))
        m = int(rng.integers(1, order + 1))
        rows = [tuple(r) for r in enumerate_basis(m_body_set(order, m), dims)]
        assert rows == sorted(rows)
        assert len(rows) == len(set(rows))
        assert all(any(v > 0 for v in r) for r in rows)


def test_count_parameters_examples():
    assert count_parameters(cyclic_set(3), (2, 2, 2)) == 7
    assert count_parameters(m_body_set(2, 1), (3, 4)) == 6
    assert count_parameters(cyclic_set(4), (40, 40, 3, 10)) == 2058


def test_count_matches_basis_size():
    rng = np.random.default_rng(1)
    for _ in range(20):
        order = int(rng.integers(2, 5))
        dims = tuple(int(d) for d in rng.integers(1, 5, order))
        iset = cyclic_set(order) if rng.random() < 0.5 else m_body_set(
            order, int(rng.integers(1, order + 1))
        )
        assert count_parameters(iset, dims) == 1 + enumerate_basis(iset, dims).shape[0]


def test_cyclic_count_closed_form():
    rng = np.random.default_rng(2)
    for _ in range(20):
        order = int(rng.integers(3, 7))
        dims = [int(d) for d in rng.integers(2, 8, order)]
        expected = (
            1
            + sum(d - 1 for d in dims)
            + sum((dims[i] - 1) * (dims[(i + 1) % order] - 1) for i in range(order))
        )
        assert count_parameters(cyclic_set(order), dims) == expected
