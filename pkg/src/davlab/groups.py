"""Finite abelian groups in invariant-factor form, with flat element indexing.

Every group is Z_{n_1} x ... x Z_{n_s} with n_1 | n_2 | ... | n_s.  Elements
are coordinate tuples; the flat index treats the last factor as the
fastest-varying digit, so in Z_2 x Z_3 the element (1, 2) has index 5.  All
bit-vector residue sets elsewhere in the package rely on this layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm, prod
from typing import Iterator, Sequence

from sympy import factorint

Element = tuple[int, ...]

# Flat bit-vector sets over the group need |G| bits apiece; past this the
# memoized search would thrash long before correctness becomes the issue.
DEFAULT_ORDER_LIMIT = 10**6


class GroupOrderError(ValueError):
    """Requested group exceeds the configured order limit."""


@dataclass(frozen=True)
class GroupSpec:
    """Invariant-factor chain (n_1, ..., n_s) with n_1 | n_2 | ... | n_s."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self) -> None:
        fs = self.invariant_factors
        if not isinstance(fs, tuple):
            object.__setattr__(self, "invariant_factors", tuple(fs))
            fs = self.invariant_factors
        if not fs:
            raise ValueError("trivial group: at least one invariant factor required")
        for n in fs:
            if not isinstance(n, int) or n < 2:
                raise ValueError(f"invariant factor {n!r} is not an integer >= 2")
        for a, b in zip(fs, fs[1:]):
            if b % a != 0:
                raise ValueError(f"invariant factors {fs} do not form a divisibility chain")

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) == 1

    def zero(self) -> Element:
        return (0,) * len(self.invariant_factors)

    def elements(self) -> Iterator[Element]:
        """All elements in flat-index order."""
        n = self.order
        return (index_element(self, i) for i in range(n))

    def __str__(self) -> str:
        return "x".join(f"Z{n}" for n in self.invariant_factors)


def cyclic(n: int) -> GroupSpec:
    return GroupSpec((n,))


def normalize_group(orders: Sequence[int], order_limit: int = DEFAULT_ORDER_LIMIT) -> GroupSpec:
    """Canonical invariant-factor form of Z_{o_1} x ... x Z_{o_r}.

    Merges the prime-power content of the given cyclic orders into a
    divisibility chain, e.g. [4, 6] -> (2, 12).
    """
    if not orders:
        raise ValueError("trivial group: need at least one cyclic order")
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"cyclic order {n!r} is not a positive integer")
        if n == 1:
            continue  # Z_1 contributes nothing
        for p, e in factorint(n).items():
            by_prime.setdefault(p, []).append(e)
    if not by_prime:
        raise ValueError("trivial group: all cyclic orders are 1")
    for exps in by_prime.values():
        exps.sort(reverse=True)
    depth = max(len(exps) for exps in by_prime.values())
    factors = []
    for j in range(depth):
        factors.append(prod(p ** exps[j] for p, exps in by_prime.items() if len(exps) > j))
    factors.reverse()
    total = prod(factors)
    if total > order_limit:
        raise GroupOrderError(f"group order {total} exceeds limit {order_limit}")
    return GroupSpec(tuple(factors))


def parse_group(text: str, order_limit: int = DEFAULT_ORDER_LIMIT) -> GroupSpec:
    """Parse CLI group syntax: '12' or '2x4' or '3x3x9'."""
    parts = text.lower().replace("*", "x").split("x")
    try:
        orders = [int(p.strip()) for p in parts]
    except ValueError:
        raise ValueError(f"cannot parse group {text!r}: expected N or NxM...") from None
    return normalize_group(orders, order_limit=order_limit)


def add(group: GroupSpec, g: Element, h: Element) -> Element:
    fs = group.invariant_factors
    if len(g) != len(fs) or len(h) != len(fs):
        raise ValueError("coordinate count mismatch")
    return tuple((a + b) % n for a, b, n in zip(g, h, fs))


def neg(group: GroupSpec, g: Element) -> Element:
    return tuple((-a) % n for a, n in zip(g, group.invariant_factors))


def scalar_mul(group: GroupSpec, c: int, g: Element) -> Element:
    fs = group.invariant_factors
    if len(g) != len(fs):
        raise ValueError("coordinate count mismatch")
    return tuple((c * a) % n for a, n in zip(g, fs))


def is_zero(group: GroupSpec, g: Element) -> bool:
    return all(a == 0 for a in g)


def element_order(group: GroupSpec, g: Element) -> int:
    return lcm(*(n // gcd(a, n) for a, n in zip(g, group.invariant_factors)))


def check_element(group: GroupSpec, g: Element) -> Element:
    """Validate coordinates; raises ValueError on malformed input."""
    fs = group.invariant_factors
    if not isinstance(g, tuple) or len(g) != len(fs):
        raise ValueError(f"element {g!r} does not have {len(fs)} coordinates")
    for a, n in zip(g, fs):
        if not isinstance(a, int) or not 0 <= a < n:
            raise ValueError(f"coordinate {a!r} out of range for Z_{n}")
    return g


def as_element(group: GroupSpec, v) -> Element:
    """Coerce ints (cyclic groups) or iterables to a validated element."""
    if isinstance(v, int):
        if group.is_cyclic:
            return (v % group.invariant_factors[0],)
        raise ValueError(f"bare integer {v} is ambiguous for {group}")
    return check_element(group, tuple(v))


def element_index(group: GroupSpec, g: Element) -> int:
    i = 0
    for a, n in zip(g, group.invariant_factors):
        i = i * n + a
    return i


def index_element(group: GroupSpec, i: int) -> Element:
    coords = []
    for n in reversed(group.invariant_factors):
        i, a = divmod(i, n)
        coords.append(a)
    if i:
        raise ValueError("index out of range")
    coords.reverse()
    return tuple(coords)


def units(n: int) -> list[int]:
    return [u for u in range(1, n) if gcd(u, n) == 1]


@lru_cache(maxsize=None)
def _orbit_min_table(group: GroupSpec) -> tuple[int, ...]:
    """For each flat index, the least index in its unit-scaling orbit."""
    n = group.order
    if group.is_cyclic:
        # scaling orbits in Z_n are the sets {x : gcd(x, n) = d}; min is d
        m = group.invariant_factors[0]
        return tuple(gcd(i, m) if i else 0 for i in range(m))
    table = list(range(n))
    us = units(group.exponent)
    for i in range(1, n):
        g = index_element(group, i)
        best = min(element_index(group, scalar_mul(group, u, g)) for u in us)
        table[i] = best
    return tuple(table)


@lru_cache(maxsize=None)
def canonical_roots(group: GroupSpec) -> tuple[int, ...]:
    """Nonzero flat indices minimal in their unit-scaling orbit, ascending.

    Every maximal zero-sum-free multiset is unit-equivalent to one starting at
    such a root, so the solver only ever branches on these first elements.
    For cyclic Z_n these are exactly the divisors d of n with d < n.
    """
    table = _orbit_min_table(group)
    return tuple(i for i in range(1, group.order) if table[i] == i)
