"""Brute-force order oracles, independent of the algorithmic leq/join.

Everything here is phrased through ``multiply`` and element enumeration
only: ``a <= b`` means ``b`` appears among the products ``a c``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .monoid import INFINITY, FreeAbelian

__all__ = ["UpSets", "brute_leq", "brute_join", "brute_sigma", "brute_left_divisors"]


class UpSets:
    """Memoised sets ``{a c : |c| <= bound - |a|}`` for a fixed length bound."""

    def __init__(self, monoid, bound: int):
        self.monoid = monoid
        self.bound = bound
        self._by_len = [monoid.elements_of_length(n) for n in range(bound + 1)]
        self.up = lru_cache(maxsize=None)(self._up)

    def _length(self, a) -> int:
        # length from the raw tuple, without the algorithms under test
        if isinstance(self.monoid, FreeAbelian):
            return sum(a)
        return sum(n for _, n in a)

    def _up(self, a) -> frozenset:
        la = self._length(a)
        out = set()
        for n in range(self.bound - la + 1):
            out.update(self.monoid.multiply(a, c) for c in self._by_len[n])
        return frozenset(out)

    def leq(self, a, b) -> bool:
        if self._length(b) > self.bound:
            raise ValueError("element longer than the search bound")
        return b in self.up(a)

    def join(self, a, b):
        common = self.up(a) & self.up(b)
        if not common:
            return INFINITY
        least = [r for r in common if common <= self.up(r)]
        if len(least) != 1:
            raise AssertionError(f"no unique least upper bound for {a}, {b}")
        return least[0]


def brute_leq(monoid, a, b) -> bool:
    """Whether some ``c`` of the right length has ``a c = b``."""
    u = UpSets(monoid, _raw_len(monoid, b))
    return u.leq(a, b)


def brute_join(monoid, a, b, bound=None):
    """Least common upper bound found by search over words of length <= bound."""
    bound = _raw_len(monoid, a) + _raw_len(monoid, b) if bound is None else bound
    return UpSets(monoid, bound).join(a, b)


def brute_sigma(monoid, elements, bound=None):
    elements = list(elements)
    if not elements:
        return monoid.identity
    bound = sum(_raw_len(monoid, a) for a in elements) if bound is None else bound
    u = UpSets(monoid, bound)
    common = frozenset.intersection(*(u.up(a) for a in elements))
    if not common:
        return INFINITY
    least = [r for r in common if common <= u.up(r)]
    return least[0]


def brute_left_divisors(monoid, a) -> set:
    n = _raw_len(monoid, a)
    u = UpSets(monoid, n)
    return {c for k in range(n + 1) for c in monoid.elements_of_length(k) if a in u.up(c)}


def _raw_len(monoid, a) -> int:
    if isinstance(monoid, FreeAbelian):
        return sum(a)
    return sum(n for _, n in a)


def box_join(a, b):
    """Join in N^k by scanning every candidate in the box [0, a + b]."""
    ranges = [range(x + y + 1) for x, y in zip(a, b)]
    ubs = [
        r for r in itertools.product(*ranges)
        if all(ri - ai >= 0 for ri, ai in zip(r, a)) and all(ri - bi >= 0 for ri, bi in zip(r, b))
    ]
    least = [r for r in ubs if all(all(x <= y for x, y in zip(r, o)) for o in ubs)]
    return least[0]
