import math

import pytest
from sympy import primerange

from davlab.fdsolver import (
    FdStatus,
    fd,
    fd_fast_k2,
    fd_lower_bound,
    fd_relation_checks,
    ratio_covers,
)
from davlab.groups import cyclic, normalize_group
from davlab.solver import Budget

from conftest import brute_fd


def test_fd_z9_k2():
    res = fd(cyclic(9), 2)
    assert res.status is FdStatus.FINITE
    assert res.value == 2
    assert res.witness_set.residues == (3, 6)
    assert res.sizes_excluded == 1


def test_fd_z7_k2():
    res = fd(cyclic(7), 2)
    assert res.value == 3
    assert res.witness_set.residues == (1, 2, 5)


def test_fd_z5_k2():
    # |A/A| <= 7 for any 2-subset of Z_5*, and covering needs all 4 units
    # plus closure under inversion; exhaustive search settles the value at 3
    assert fd(cyclic(5), 2).value == 3


def test_fd_k1_infinite():
    res = fd(cyclic(5), 1)
    assert res.status is FdStatus.INFINITE
    assert res.value is None
    assert res.sizes_excluded == 4


def test_fd_klein_group():
    klein = normalize_group([2, 2])
    assert fd(klein, 2).status is FdStatus.INFINITE
    assert fd(klein, 3).value == 1


def test_fd_matches_brute_force():
    for n in range(3, 14):
        for k in (2, 3):
            got = fd(cyclic(n), k)
            want = brute_fd(n, k)
            if want is None:
                assert got.status is FdStatus.INFINITE, (n, k)
            else:
                assert got.value == want, (n, k)


def test_fd_fast_k2_equals_general():
    for p in primerange(3, 32):
        assert fd_fast_k2(p).value == fd(cyclic(p), 2).value, p


def test_fd_budget_unknown():
    res = fd(cyclic(31), 2, budget=Budget(max_nodes=50, max_seconds=None))
    assert res.status is FdStatus.UNKNOWN
    assert res.value is None
    assert res.sizes_excluded >= 0
    assert res.as_comparable  # attribute exists
    with pytest.raises(ValueError):
        res.as_comparable()


def test_fd_comparable():
    assert fd(cyclic(9), 2).as_comparable() == 2
    assert fd(normalize_group([2, 2]), 2).as_comparable() == math.inf


def test_fd_lower_bound():
    assert fd_lower_bound(31, 2) == 6  # ceil(sqrt(30))
    assert fd_lower_bound(7, 2) == 3
    assert fd_lower_bound(101, 3) == 4  # ceil(101^(1/3) - 1) adjusted to search start
    assert fd_lower_bound(3, 2) == 2
    with pytest.raises(ValueError):
        fd_lower_bound(9, 2)
    with pytest.raises(ValueError):
        fd_lower_bound(7, 1)


def test_ratio_covers():
    assert ratio_covers(7, (1, 2, 5))
    assert not ratio_covers(7, (1, 2))
    assert ratio_covers(13, (1, 4, 6, 12))


def test_fd_value_via_ratio_criterion():
    # D_A(Z_p) <= 2 iff A/A covers the units; fd witness must satisfy it
    res = fd(cyclic(13), 2)
    assert ratio_covers(13, res.witness_set.residues)
    assert res.value == 4


def test_fd_relation_checks_hold():
    for p, m, k in ((3, 2, 2), (5, 2, 2), (2, 3, 2), (2, 2, 4)):
        rep = fd_relation_checks(p, m, k)
        assert rep.all_hold, (p, m, k, [c.name for c in rep.checks if not c.holds])


def test_fd_thread_invariance():
    a = fd(cyclic(13), 2, threads=1)
    b = fd(cyclic(13), 2, threads=3)
    assert (a.status, a.value, a.witness_set) == (b.status, b.value, b.witness_set)
