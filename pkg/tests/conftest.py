"""Shared brute-force oracles, deliberately independent of the package's
bit-vector engine: plain tuple arithmetic and itertools enumeration only."""

from __future__ import annotations

import itertools

import pytest


def tuple_add(factors, x, y):
    return tuple((a + b) % n for a, b, n in zip(x, y, factors))


def tuple_scale(factors, c, x):
    return tuple((c * a) % n for a, n in zip(x, factors))


def brute_reachable(factors, weights, entries):
    """All nonempty weighted subsequence sums via (A union {0})^m products."""
    zero = (0,) * len(factors)
    sums = set()
    choices = [(0,) + tuple(weights)] * len(entries)
    for coeffs in itertools.product(*choices):
        if all(c == 0 for c in coeffs):
            continue
        total = zero
        for c, x in zip(coeffs, entries):
            total = tuple_add(factors, total, tuple_scale(factors, c, x))
        sums.add(total)
    return sums


def brute_is_zsf(factors, weights, entries):
    zero = (0,) * len(factors)
    return zero not in brute_reachable(factors, weights, entries)


def brute_davenport(factors, weights):
    """1 + longest zero-sum-free multiset, by depth-first enumeration."""
    elements = list(itertools.product(*[range(n) for n in factors]))
    nonzero = [e for e in elements if any(e)]
    best = 0

    def rec(start, chosen):
        nonlocal best
        if len(chosen) > best:
            best = len(chosen)
        for i in range(start, len(nonzero)):
            cand = chosen + [nonzero[i]]
            if brute_is_zsf(factors, weights, cand):
                rec(i, cand)

    rec(0, [])
    return best + 1


def brute_has_zsf_of_length(factors, weights, length):
    """Depth-limited search for one zero-sum-free multiset of a given size."""
    elements = [e for e in itertools.product(*[range(n) for n in factors]) if any(e)]

    def rec(start, chosen, remaining):
        if remaining == 0:
            return True
        for i in range(start, len(elements)):
            cand = chosen + [elements[i]]
            if brute_is_zsf(factors, weights, cand) and rec(i, cand, remaining - 1):
                return True
        return False

    return rec(0, [], length)


def brute_fd(n, k, max_size=None):
    """Minimum weight-set size with Davenport value <= k over Z_n, or None.

    D_A <= k iff no zero-sum-free multiset of size k exists."""
    limit = max_size if max_size is not None else n - 1
    for size in range(1, limit + 1):
        for residues in itertools.combinations(range(1, n), size):
            if not brute_has_zsf_of_length((n,), residues, k):
                return size
    return None


@pytest.fixture
def oracles():
    return {
        "reachable": brute_reachable,
        "is_zsf": brute_is_zsf,
        "davenport": brute_davenport,
        "has_zsf": brute_has_zsf_of_length,
        "fd": brute_fd,
    }
