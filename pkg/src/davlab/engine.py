"""Weighted subsequence-sum engine over bit-vector residue sets.

A subset of a group of order n lives in a single Python int of n bits, bit i
standing for the element with flat index i.  Translating a whole set by a
group element is then a masked shift (a rotation for cyclic groups), which is
what makes the reachable-sum recurrence

    R_i = R_{i-1}  union  A*x_i  union  (R_{i-1} + A*x_i)

cheap enough to drive exhaustive Davenport searches.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Iterator, Sequence

from .groups import (
    DEFAULT_ORDER_LIMIT,
    Element,
    GroupOrderError,
    GroupSpec,
    as_element,
    element_index,
    index_element,
    scalar_mul,
    units,
)


@dataclass(frozen=True)
class WeightSet:
    """Nonempty set of weights in [1, exponent-1], stored sorted."""

    exponent: int
    residues: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.exponent < 2:
            raise ValueError("exponent must be >= 2")
        rs = self.residues
        if not rs:
            raise ValueError("weight set must be nonempty")
        for r in rs:
            if not isinstance(r, int) or not 1 <= r < self.exponent:
                raise ValueError(f"weight {r!r} not in [1, {self.exponent - 1}]")
        if any(a >= b for a, b in zip(rs, rs[1:])):
            raise ValueError("weights must be strictly increasing; use WeightSet.of")

    @classmethod
    def of(cls, exponent: int, values: Iterable[int]) -> "WeightSet":
        """Normalize arbitrary integers mod exponent; 0 is rejected."""
        vals = sorted({v % exponent for v in values})
        if any(v == 0 for v in vals):
            raise ValueError("weight 0 (mod exponent) is not allowed")
        return cls(exponent, tuple(vals))

    def dilated(self, c: int) -> "WeightSet":
        return WeightSet.of(self.exponent, (c * r for r in self.residues))

    def __len__(self) -> int:
        return len(self.residues)

    def __iter__(self) -> Iterator[int]:
        return iter(self.residues)

    def __contains__(self, v: int) -> bool:
        return v in self.residues


@dataclass(frozen=True)
class GSequence:
    """Finite sequence over a group; order never matters for zero-sums."""

    group: GroupSpec
    entries: tuple[Element, ...]

    def __post_init__(self) -> None:
        for g in self.entries:
            if len(g) != self.group.rank:
                raise ValueError(f"entry {g!r} does not live in {self.group}")
            for a, n in zip(g, self.group.invariant_factors):
                if not 0 <= a < n:
                    raise ValueError(f"entry {g!r} out of range for {self.group}")

    @classmethod
    def of(cls, group: GroupSpec, entries: Iterable) -> "GSequence":
        return cls(group, tuple(as_element(group, e) for e in entries))

    def __len__(self) -> int:
        return len(self.entries)


class _Layout:
    """Shift/mask tables realizing one group's translation action on bit sets."""

    __slots__ = ("group", "order", "mask", "_strides", "_digit_masks", "_cyclic")

    def __init__(self, group: GroupSpec):
        n = group.order
        if n > DEFAULT_ORDER_LIMIT:
            raise GroupOrderError(f"group order {n} exceeds limit {DEFAULT_ORDER_LIMIT}")
        self.group = group
        self.order = n
        self.mask = (1 << n) - 1
        self._cyclic = group.is_cyclic
        if self._cyclic:
            self._strides = (1,)
            self._digit_masks = None
            return
        fs = group.invariant_factors
        strides = [1] * len(fs)
        for j in range(len(fs) - 2, -1, -1):
            strides[j] = strides[j + 1] * fs[j + 1]
        self._strides = tuple(strides)
        # digit_masks[j][d]: all indices whose j-th coordinate equals d
        masks = []
        for j, nj in enumerate(fs):
            st = strides[j]
            period = nj * st
            reps = n // period
            comb = ((1 << (period * reps)) - 1) // ((1 << period) - 1)  # bits at multiples of period
            block = (1 << st) - 1
            masks.append(tuple(comb * (block << (d * st)) for d in range(nj)))
        self._digit_masks = masks

    def translate(self, bits: int, idx: int) -> int:
        """Image of the set under x -> x + g where g has flat index idx."""
        if idx == 0 or bits == 0:
            return bits
        if self._cyclic:
            n = self.order
            return ((bits << idx) | (bits >> (n - idx))) & self.mask
        g = index_element(self.group, idx)
        for j, c in enumerate(g):
            if c == 0:
                continue
            nj = self.group.invariant_factors[j]
            st = self._strides[j]
            dm = self._digit_masks[j]
            acc = 0
            for d in range(nj):
                part = bits & dm[d]
                if not part:
                    continue
                delta = (((d + c) % nj) - d) * st
                acc |= (part << delta) if delta >= 0 else (part >> -delta)
            bits = acc
        return bits

    def negate(self, bits: int) -> int:
        """Image of the set under x -> -x."""
        if bits == 0:
            return 0
        if self._cyclic:
            n = self.order
            rev = int(format(bits, f"0{n}b")[::-1], 2)  # index i -> n-1-i
            return ((rev << 1) | (rev >> (n - 1))) & self.mask
        for j, nj in enumerate(self.group.invariant_factors):
            st = self._strides[j]
            dm = self._digit_masks[j]
            acc = bits & dm[0]
            for d in range(1, nj):
                part = bits & dm[d]
                if not part:
                    continue
                acc |= part << ((nj - 2 * d) * st) if nj >= 2 * d else part >> ((2 * d - nj) * st)
            bits = acc
        return bits


@lru_cache(maxsize=None)
def _layout(group: GroupSpec) -> _Layout:
    return _Layout(group)


def iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class ResidueSet:
    """Immutable subset of a group backed by a bit vector."""

    group: GroupSpec
    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.group.order:
            raise ValueError("bit vector out of range for group")

    @classmethod
    def empty(cls, group: GroupSpec) -> "ResidueSet":
        return cls(group, 0)

    @classmethod
    def full(cls, group: GroupSpec) -> "ResidueSet":
        return cls(group, (1 << group.order) - 1)

    @classmethod
    def of(cls, group: GroupSpec, elems: Iterable) -> "ResidueSet":
        bits = 0
        for e in elems:
            bits |= 1 << element_index(group, as_element(group, e))
        return cls(group, bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, e) -> bool:
        return (self.bits >> element_index(self.group, as_element(self.group, e))) & 1 == 1

    def indices(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def elements(self) -> list[Element]:
        return [index_element(self.group, i) for i in self.indices()]

    def __or__(self, other: "ResidueSet") -> "ResidueSet":
        _same_group(self, other)
        return ResidueSet(self.group, self.bits | other.bits)

    def __and__(self, other: "ResidueSet") -> "ResidueSet":
        _same_group(self, other)
        return ResidueSet(self.group, self.bits & other.bits)


def _same_group(a: ResidueSet, b: ResidueSet) -> None:
    if a.group != b.group:
        raise ValueError(f"group mismatch: {a.group} vs {b.group}")


def _weight_indices(group: GroupSpec, weights: WeightSet, entry: Element) -> list[int]:
    """Distinct flat indices of a*entry over a in the weight set."""
    return sorted({element_index(group, scalar_mul(group, a, entry)) for a in weights.residues})


def _check_weights(group: GroupSpec, weights: WeightSet) -> None:
    if weights.exponent != group.exponent:
        raise ValueError(
            f"weight exponent {weights.exponent} does not match exp({group}) = {group.exponent}"
        )


def reachable_sums(group: GroupSpec, weights: WeightSet, seq: GSequence) -> ResidueSet:
    """All values of sum a_i x_i over nonempty subsequences and weights a_i."""
    _check_weights(group, weights)
    if seq.group != group:
        raise ValueError("sequence group mismatch")
    lay = _layout(group)
    bits = 0
    for entry in seq.entries:
        w = 0
        for i in _weight_indices(group, weights, entry):
            w |= 1 << i
        nxt = bits | w
        for i in iter_bits(w):
            nxt |= lay.translate(bits, i)
        bits = nxt
    return ResidueSet(group, bits)


def has_weighted_zero_sum(group: GroupSpec, weights: WeightSet, seq: GSequence) -> bool:
    """True when some nonempty subsequence admits a weighted zero-sum."""
    _check_weights(group, weights)
    if seq.group != group:
        raise ValueError("sequence group mismatch")
    lay = _layout(group)
    bits = 0
    for entry in seq.entries:
        w = 0
        for i in _weight_indices(group, weights, entry):
            w |= 1 << i
        if w & 1:
            return True
        nxt = bits | w
        for i in iter_bits(w):
            nxt |= lay.translate(bits, i)
        if nxt & 1:
            return True
        bits = nxt
    return False


def sumset(s: ResidueSet, t: ResidueSet) -> ResidueSet:
    """{x + y : x in S, y in T}."""
    _same_group(s, t)
    lay = _layout(s.group)
    small, big = (s, t) if len(s) <= len(t) else (t, s)
    acc = 0
    for i in small.indices():
        acc |= lay.translate(big.bits, i)
    return ResidueSet(s.group, acc)


def dilate(c: int, s: ResidueSet) -> ResidueSet:
    """{c*x : x in S}; not injective unless c is a unit."""
    group = s.group
    acc = 0
    for i in s.indices():
        acc |= 1 << element_index(group, scalar_mul(group, c, index_element(group, i)))
    return ResidueSet(group, acc)


def negate(s: ResidueSet) -> ResidueSet:
    return ResidueSet(s.group, _layout(s.group).negate(s.bits))


def difference_set(s: ResidueSet, t: ResidueSet) -> ResidueSet:
    """{x - y : x in S, y in T}."""
    return sumset(s, negate(t))


def quotient_set(s: ResidueSet, t: ResidueSet) -> ResidueSet:
    """{x * y^{-1} : x in S, y in T a unit}; needs a cyclic group.

    Non-unit denominators are skipped; if T contains no unit at all the
    quotient is undefined and a ValueError is raised.
    """
    _same_group(s, t)
    group = s.group
    if not group.is_cyclic:
        raise ValueError("quotient sets are only defined over cyclic groups")
    n = group.order
    inverses = []
    for i in t.indices():
        if gcd(i, n) == 1:
            inverses.append(pow(i, -1, n))
    if not inverses:
        raise ValueError("denominator set contains no unit")
    acc = 0
    src = list(s.indices())
    for inv in inverses:
        for i in src:
            acc |= 1 << (i * inv % n)
    return ResidueSet(group, acc)


def covers_observation(group: GroupSpec, a: ResidueSet, b: ResidueSet) -> bool:
    """Whether (B - B) / (A - A)_* covers all of Z_p.

    Implements the covering test behind the density criterion: for subsets of
    Z_p* with |A| * |B| > p the quotient of difference sets is all of Z_p.
    """
    if not group.is_cyclic:
        raise ValueError("covering test is only defined over cyclic groups")
    from sympy import isprime

    n = group.order
    if not isprime(n):
        raise ValueError(f"covering test needs a prime modulus, got {n}")
    if (a.bits & 1) or (b.bits & 1):
        raise ValueError("A and B must avoid 0")
    if len(a) < 2:
        raise ValueError("(A - A) has no nonzero part for |A| < 2")
    diffs_b = difference_set(b, b)
    diffs_a = ResidueSet(group, difference_set(a, a).bits & ~1)  # strip 0
    q = quotient_set(diffs_b, diffs_a)
    # 0 is hit by 0 in B - B, so compare against the full group
    return (q.bits | 1) == (1 << n) - 1


def dilation_orbit_reps(n: int, size: int) -> Iterator[tuple[int, ...]]:
    """Lexicographically ordered orbit representatives of size-k weight sets.

    Two weight sets related by a unit dilation share every zero-sum statistic,
    so searches only visit the lex-least member of each orbit.  When n is
    prime the representative always contains 1 and canonicity is checked by
    comparing against the |S| dilations a^{-1} S with a in S.
    """
    if size < 1 or size > n - 1:
        return
    from sympy import isprime

    if isprime(n):
        for rest in combinations(range(2, n), size - 1):
            s = (1,) + rest
            if _canonical_prime(n, s):
                yield s
        return
    us = units(n)
    for s in combinations(range(1, n), size):
        if all(s <= tuple(sorted(u * x % n for x in s)) for u in us):
            yield s


def _canonical_prime(p: int, s: tuple[int, ...]) -> bool:
    # the lex-least dilate of S containing 1 arises as a^{-1} S for some a in S
    for a in s:
        inv = pow(a, -1, p)
        if tuple(sorted(inv * x % p for x in s)) < s:
            return False
    return True
