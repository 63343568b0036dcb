import itertools
from collections import Counter
from math import gcd, lcm

import pytest
from hypothesis import given, strategies as st

from davlab.groups import (
    GroupOrderError,
    GroupSpec,
    add,
    as_element,
    canonical_roots,
    check_element,
    cyclic,
    element_index,
    element_order,
    index_element,
    neg,
    normalize_group,
    parse_group,
    scalar_mul,
    units,
)


def test_divisibility_chain_enforced():
    with pytest.raises(ValueError):
        GroupSpec((3, 2))
    with pytest.raises(ValueError):
        GroupSpec((2, 3))
    GroupSpec((2, 4))  # fine


def test_cyclic_and_str():
    g = cyclic(12)
    assert g.invariant_factors == (12,)
    assert g.order == 12 and g.exponent == 12 and g.rank == 1
    assert str(g) == "Z12"
    assert str(GroupSpec((2, 12))) == "Z2xZ12"


def test_normalize_regroups_to_invariant_factors():
    assert normalize_group([4, 6]).invariant_factors == (2, 12)
    assert normalize_group([2, 3]).invariant_factors == (6,)
    assert normalize_group([1, 5]).invariant_factors == (5,)
    assert normalize_group([2, 2, 2]).invariant_factors == (2, 2, 2)
    assert normalize_group([6, 10, 15]).invariant_factors == (30, 30)


def _order_census_raw(factors):
    """Element order census straight from the direct product, no package code."""
    out = Counter()
    for e in itertools.product(*[range(n) for n in factors]):
        out[lcm(*(n // gcd(x, n) for x, n in zip(e, factors)))] += 1
    return out


@pytest.mark.parametrize("factors", [[4, 6], [2, 3], [6, 10, 15], [8, 12], [9, 3]])
def test_normalize_preserves_element_order_census(factors):
    # the census distinguishes finite abelian groups up to isomorphism
    g = normalize_group(factors)
    got = Counter(element_order(g, e) for e in g.elements())
    assert got == _order_census_raw(factors)


def test_order_limit():
    with pytest.raises(GroupOrderError):
        normalize_group([10**4, 10**4])
    normalize_group([10**4, 10**4], order_limit=10**8)


def test_parse_group():
    assert parse_group("8").invariant_factors == (8,)
    assert parse_group("2x4").invariant_factors == (2, 4)
    assert parse_group("4x6").invariant_factors == (2, 12)
    with pytest.raises(ValueError):
        parse_group("0")
    with pytest.raises(ValueError):
        parse_group("2xx4")


def test_add_scalar_neg():
    g = GroupSpec((2, 4))
    assert add(g, (1, 3), (1, 2)) == (0, 1)
    assert scalar_mul(g, 3, (1, 2)) == (1, 2)
    assert neg(g, (1, 3)) == (1, 1)
    with pytest.raises(ValueError):
        add(g, (1,), (1, 2))
    with pytest.raises(ValueError):
        scalar_mul(g, 2, (1, 2, 3))


def test_element_order():
    g = GroupSpec((2, 12))
    assert element_order(g, (0, 0)) == 1
    assert element_order(g, (1, 0)) == 2
    assert element_order(g, (1, 3)) == 4
    assert element_order(g, (0, 1)) == 12


def test_check_and_coerce():
    g = cyclic(9)
    assert as_element(g, 5) == (5,)
    assert as_element(g, (5,)) == (5,)
    with pytest.raises(ValueError):
        check_element(g, (9,))
    with pytest.raises(ValueError):
        check_element(GroupSpec((2, 4)), (1,))


@given(st.integers(2, 40), st.data())
def test_index_roundtrip_cyclic(n, data):
    g = cyclic(n)
    i = data.draw(st.integers(0, n - 1))
    assert element_index(g, index_element(g, i)) == i


def test_index_roundtrip_product():
    g = GroupSpec((2, 4))
    seen = set()
    for i in range(8):
        e = index_element(g, i)
        assert element_index(g, e) == i
        seen.add(e)
    assert len(seen) == 8
    with pytest.raises(ValueError):
        index_element(g, 8)


def test_units():
    assert tuple(units(12)) == (1, 5, 7, 11)
    assert tuple(units(7)) == (1, 2, 3, 4, 5, 6)
    assert tuple(units(2)) == (1,)


def test_canonical_roots():
    assert canonical_roots(cyclic(7)) == (1,)
    # cyclic n: orbit minima under unit dilation are the divisors of n below n
    assert set(canonical_roots(cyclic(12))) == {
        element_index(cyclic(12), (d,)) for d in (1, 2, 3, 4, 6)
    }
    g22 = GroupSpec((2, 2))
    assert element_index(g22, (0, 1)) in canonical_roots(g22)
