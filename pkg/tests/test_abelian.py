import itertools
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint
from sympy.utilities.iterables import partitions

from aggroups.abelian import (
    AbelianGroupType,
    add,
    element_of,
    elements,
    format_type,
    from_invariant_factors,
    groups_of_order,
    index,
    neg,
    parse_type,
    to_invariant_factors,
    zero,
)

from conftest import elements_of


def n_partitions(d):
    return sum(1 for _ in partitions(d))


def test_groups_of_order_examples():
    assert [format_type(t) for t in groups_of_order(8)] == ["Z8", "Z4xZ2", "Z2^3"]
    assert groups_of_order(1) == [AbelianGroupType(())]
    assert [t.factors for t in groups_of_order(12)] == [(4, 3), (2, 2, 3)]


def test_groups_of_order_rejects_zero():
    with pytest.raises(ValueError, match="order"):
        groups_of_order(0)


@pytest.mark.parametrize("n", range(1, 201))
def test_groups_of_order_count_and_uniqueness(n):
    ts = groups_of_order(n)
    expected = 1
    for d in factorint(n).values():
        expected *= n_partitions(d)
    assert len(ts) == expected
    assert len(set(ts)) == len(ts)
    assert all(t.order == n for t in ts)
    # distinct invariant-factor forms confirm the types are pairwise non-isomorphic
    assert len({to_invariant_factors(t) for t in ts}) == len(ts)


def test_groups_of_order_multiplicative():
    for m in range(1, 40):
        for n in range(1, 40):
            if gcd(m, n) == 1:
                assert len(groups_of_order(m * n)) == len(groups_of_order(m)) * len(groups_of_order(n))


def test_canonical_form():
    assert AbelianGroupType((2, 4, 3)) == AbelianGroupType((3, 2, 4))
    assert AbelianGroupType((2, 4, 3)).factors == (4, 2, 3)
    with pytest.raises(ValueError):
        AbelianGroupType((6,))
    with pytest.raises(ValueError):
        AbelianGroupType((1,))


def test_arithmetic_examples():
    t = parse_type("Z4xZ2")
    assert add(t, (3, 1), (1, 1)) == (0, 0)
    assert add(parse_type("Z9"), (5,), (7,)) == (3,)
    assert neg(t, (3, 1)) == (1, 1)
    assert neg(t, zero(t)) == zero(t)
    assert len(list(elements(t))) == 8


def test_arithmetic_errors():
    t = parse_type("Z4xZ2")
    with pytest.raises(ValueError, match="coordinates"):
        add(t, (1,), (1, 1))
    with pytest.raises(ValueError, match="range"):
        add(t, (4, 0), (1, 1))


@pytest.mark.parametrize("t", [t for n in range(1, 65) for t in groups_of_order(n)], ids=format_type)
def test_element_order_and_tables(t):
    els = list(elements(t))
    assert els == elements_of(t.factors)
    assert els[0] == zero(t)
    assert all(index(t, a) == i and element_of(t, i) == a for i, a in enumerate(els))
    A = t.add_table
    n = t.order
    ref = np.array([[index(t, add(t, a, b)) for b in els] for a in els]).reshape(n, n)
    assert np.array_equal(A, ref)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([t for n in range(1, 65) for t in groups_of_order(n)]), st.data())
def test_group_axioms(t, data):
    pick = st.tuples(*[st.integers(0, q - 1) for q in t.factors])
    a, b, c = data.draw(pick), data.draw(pick), data.draw(pick)
    assert add(t, add(t, a, b), c) == add(t, a, add(t, b, c))
    assert add(t, a, b) == add(t, b, a)
    assert add(t, a, zero(t)) == a
    assert add(t, a, neg(t, a)) == zero(t)


@pytest.mark.parametrize("n", range(1, 130))
def test_parse_format_round_trip(n):
    for t in groups_of_order(n):
        s = format_type(t)
        assert parse_type(s) == t
        assert format_type(parse_type(s)) == s
        assert from_invariant_factors(to_invariant_factors(t)) == t


def test_parser_tolerance():
    assert parse_type(" z4 X z2 ^ 3 ") == AbelianGroupType((4, 2, 2, 2))
    assert parse_type("Z2xZ4") == parse_type("Z4xZ2")
    for s in ("", "1", "Z1"):
        assert parse_type(s) == AbelianGroupType(())
    for bad in ("Z6", "Q8", "Z4x", "Z2^0", "Zx2"):
        with pytest.raises(ValueError):
            parse_type(bad)


def test_invariant_factors():
    assert to_invariant_factors(parse_type("Z4xZ2xZ3")) == (2, 12)
    assert from_invariant_factors([2, 12]) == parse_type("Z4xZ3xZ2")
    t = parse_type("Z8xZ2^2xZ9xZ3")
    ds = to_invariant_factors(t)
    assert all(ds[i + 1] % ds[i] == 0 for i in range(len(ds) - 1))
    assert int(np.prod(ds)) == t.order


def test_element_orders():
    t = parse_type("Z4xZ2xZ3")
    els = elements_of(t.factors)
    for i, a in enumerate(els):
        k = next(k for k in itertools.count(1) if all((k * x) % q == 0 for x, q in zip(a, t.factors)))
        assert t.element_orders[i] == k
