"""Quasi-lattice ordered monoids: N^k and free products of copies of N.

Elements are plain immutable tuples so they hash and compare cheaply:

* ``FreeAbelian(k)``: a tuple of ``k`` non-negative ints (the exponent vector).
* ``FreeProduct(m)``: a reduced word, i.e. a tuple of ``(component, exponent)``
  pairs with ``exponent >= 1`` and no two adjacent blocks in the same
  component.  The identity is the empty tuple.

Only divisor-style order tests are used; elements of the enveloping group are
never materialised.
"""

from __future__ import annotations

import itertools
import re
from functools import reduce
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

__all__ = [
    "INFINITY",
    "Infinity",
    "DescriptorMismatch",
    "FreeAbelian",
    "FreeProduct",
    "Monoid",
    "is_infinite",
]

MAX_EXPONENT = 2**63 - 1

# letters used to spell free-product words, component 0 first
_LETTERS = "xyzwvutsrqponmlkjihgfedcba"


class DescriptorMismatch(ValueError):
    """An element does not belong to the monoid it was handed to."""


class Infinity:
    """The join of a set with no common upper bound."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (Infinity, ())


INFINITY = Infinity()


def is_infinite(x) -> bool:
    return x is INFINITY


def _checked_add(a: int, b: int) -> int:
    c = a + b
    if c > MAX_EXPONENT:
        raise OverflowError(f"exponent {c} exceeds 64-bit range")
    return c


class _MonoidBase:
    kind: str

    # -- shared algorithms -------------------------------------------------

    def sigma(self, elements: Iterable) -> Union[tuple, Infinity]:
        """Least upper bound of a finite set; the empty set gives the identity."""
        elems = list(elements)
        for a in elems:
            self.validate(a)

        def step(acc, a):
            if acc is INFINITY:
                return INFINITY
            return self.join(acc, a)

        return reduce(step, elems, self.identity)

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def left_divisors(self, a) -> set:
        """All ``c`` with ``c <= a``."""
        self.validate(a)
        return {c for c in self.elements_up_to(self.word_length(a)) if self.leq(c, a)}

    def elements_up_to(self, L: int) -> list:
        """All elements of word length at most ``L``.

        Ordered by length, then lexicographically in the generator letters,
        so ``x x < x y < y x < y y`` and ``(1,0) < (0,1)``.
        """
        out = []
        for n in range(L + 1):
            out.extend(sorted(self.elements_of_length(n), key=self.generator_letters))
        return out

    def generator_letters(self, a) -> list[int]:
        """Greedy leftmost factorisation of ``a`` into generator indices."""
        raise NotImplementedError

    def from_letters(self, letters: Sequence[int]):
        return reduce(self.multiply, (self.generator(g) for g in letters), self.identity)

    def format_join(self, x) -> str:
        return "INFINITY" if x is INFINITY else self.format(x)


class FreeAbelian(_MonoidBase):
    """The positive cone N^k of Z^k with the coordinatewise order."""

    kind = "free_abelian"

    def __init__(self, rank: int):
        if not isinstance(rank, (int, np.integer)) or rank < 1:
            raise ValueError(f"rank must be a positive integer, got {rank!r}")
        self.rank = int(rank)

    def __repr__(self):
        return f"FreeAbelian({self.rank})"

    def __eq__(self, other):
        return isinstance(other, FreeAbelian) and other.rank == self.rank

    def __hash__(self):
        return hash((self.kind, self.rank))

    @property
    def ngens(self) -> int:
        return self.rank

    @property
    def identity(self) -> tuple:
        return (0,) * self.rank

    @property
    def totally_ordered(self) -> bool:
        return self.rank == 1

    def generator(self, g: int) -> tuple:
        return tuple(1 if i == g else 0 for i in range(self.rank))

    def element(self, *exponents) -> tuple:
        if len(exponents) == 1 and not isinstance(exponents[0], (int, np.integer)):
            exponents = tuple(exponents[0])
        a = tuple(int(x) for x in exponents)
        self.validate(a)
        return a

    def validate(self, a) -> None:
        if (
            not isinstance(a, tuple)
            or len(a) != self.rank
            or not all(isinstance(x, (int, np.integer)) and 0 <= x <= MAX_EXPONENT for x in a)
        ):
            raise DescriptorMismatch(f"{a!r} is not an element of N^{self.rank}")

    def multiply(self, a, b) -> tuple:
        self.validate(a)
        self.validate(b)
        return tuple(_checked_add(x, y) for x, y in zip(a, b))

    def leq(self, a, b) -> bool:
        self.validate(a)
        self.validate(b)
        return all(x <= y for x, y in zip(a, b))

    def join(self, a, b) -> tuple:
        self.validate(a)
        self.validate(b)
        return tuple(max(x, y) for x, y in zip(a, b))

    def left_quotient(self, a, b) -> tuple:
        """The unique ``c`` with ``a c = b``; requires ``a <= b``."""
        if not self.leq(a, b):
            raise ValueError(f"{a} is not a left divisor of {b}")
        return tuple(y - x for x, y in zip(a, b))

    def left_divisors(self, a) -> set:
        self.validate(a)
        return set(itertools.product(*(range(x + 1) for x in a)))

    def word_length(self, a) -> int:
        self.validate(a)
        return sum(a)

    def elements_of_length(self, n: int) -> list:
        # compositions of n into rank non-negative parts
        out = []
        for cuts in itertools.combinations(range(n + self.rank - 1), self.rank - 1):
            prev, parts = -1, []
            for c in cuts:
                parts.append(c - prev - 1)
                prev = c
            parts.append(n + self.rank - 1 - prev - 1)
            out.append(tuple(parts))
        return out

    def generator_letters(self, a) -> list[int]:
        self.validate(a)
        return [g for g, x in enumerate(a) for _ in range(x)]

    def random_element(self, rng: np.random.Generator, max_length: int) -> tuple:
        n = int(rng.integers(0, max_length + 1))
        cuts = sorted(rng.integers(0, n + 1, size=self.rank - 1).tolist())
        bounds = [0] + cuts + [n]
        return tuple(bounds[i + 1] - bounds[i] for i in range(self.rank))

    def format(self, a) -> str:
        return "(" + ",".join(str(x) for x in a) + ")"

    def parse(self, text: str) -> tuple:
        text = text.strip()
        if text in ("e", ""):
            return self.identity
        m = re.fullmatch(r"\(\s*([0-9,\s]*)\)", text)
        if not m:
            raise ValueError(f"cannot parse {text!r} as an element of N^{self.rank}")
        parts = [p for p in m.group(1).replace(" ", "").split(",") if p != ""]
        return self.element(*[int(p) for p in parts])

    def to_json(self, a) -> list:
        return list(a)

    def from_json(self, obj) -> tuple:
        return self.element(*obj)


class FreeProduct(_MonoidBase):
    """The free product of ``components`` copies of N, as reduced words."""

    kind = "free_product"

    def __init__(self, components: int):
        if not isinstance(components, (int, np.integer)) or components < 1:
            raise ValueError(f"component count must be a positive integer, got {components!r}")
        self.components = int(components)

    def __repr__(self):
        return f"FreeProduct({self.components})"

    def __eq__(self, other):
        return isinstance(other, FreeProduct) and other.components == self.components

    def __hash__(self):
        return hash((self.kind, self.components))

    @property
    def ngens(self) -> int:
        return self.components

    @property
    def identity(self) -> tuple:
        return ()

    @property
    def totally_ordered(self) -> bool:
        return self.components == 1

    @property
    def abelianization(self) -> FreeAbelian:
        return FreeAbelian(self.components)

    def generator(self, g: int) -> tuple:
        return ((g, 1),)

    def element(self, *blocks) -> tuple:
        """Build a word from blocks, reducing as it goes."""
        out: list[tuple[int, int]] = []
        for c, n in blocks:
            if not 0 <= c < self.components or n < 0:
                raise DescriptorMismatch(f"bad block {(c, n)!r} for {self!r}")
            if n == 0:
                continue
            if out and out[-1][0] == c:
                out[-1] = (c, _checked_add(out[-1][1], n))
            else:
                out.append((int(c), int(n)))
        return tuple(out)

    def validate(self, a) -> None:
        ok = isinstance(a, tuple)
        if ok:
            prev = None
            for blk in a:
                if not (
                    isinstance(blk, tuple)
                    and len(blk) == 2
                    and isinstance(blk[0], (int, np.integer))
                    and isinstance(blk[1], (int, np.integer))
                    and 0 <= blk[0] < self.components
                    and 1 <= blk[1] <= MAX_EXPONENT
                    and blk[0] != prev
                ):
                    ok = False
                    break
                prev = blk[0]
        if not ok:
            raise DescriptorMismatch(f"{a!r} is not a reduced word in {self!r}")

    def multiply(self, a, b) -> tuple:
        self.validate(a)
        self.validate(b)
        if a and b and a[-1][0] == b[0][0]:
            c = a[-1][0]
            return a[:-1] + ((c, _checked_add(a[-1][1], b[0][1])),) + b[1:]
        return a + b

    def leq(self, a, b) -> bool:
        self.validate(a)
        self.validate(b)
        return self._leq(a, b)

    def _leq(self, a, b) -> bool:
        while a:
            if not b or a[0][0] != b[0][0]:
                return False
            if a[0][1] < b[0][1]:
                return len(a) == 1
            if a[0][1] > b[0][1]:
                return False
            a, b = a[1:], b[1:]
        return True

    def join(self, a, b):
        self.validate(a)
        self.validate(b)
        return self._join(a, b)

    def _join(self, a, b):
        prefix: list = []
        while True:
            if not a:
                return tuple(prefix) + b
            if not b:
                return tuple(prefix) + a
            (ca, na), (cb, nb) = a[0], b[0]
            if ca != cb:
                return INFINITY
            if na == nb:
                prefix.append(a[0])
                a, b = a[1:], b[1:]
            elif na < nb:
                return tuple(prefix) + b if len(a) == 1 else INFINITY
            else:
                return tuple(prefix) + a if len(b) == 1 else INFINITY

    def left_quotient(self, a, b) -> tuple:
        """The unique ``c`` with ``a c = b``; requires ``a <= b``."""
        if not self.leq(a, b):
            raise ValueError(f"{a} is not a left divisor of {b}")
        while a and a[0] == b[0]:
            a, b = a[1:], b[1:]
        if not a:
            return b
        c, n = b[0]
        return ((c, n - a[0][1]),) + b[1:]

    def left_divisors(self, a) -> set:
        self.validate(a)
        out = {()}
        for k, (c, n) in enumerate(a):
            out.update(a[:k] + ((c, j),) for j in range(1, n + 1))
        return out

    def word_length(self, a) -> int:
        self.validate(a)
        return sum(n for _, n in a)

    def theta(self, a) -> tuple:
        """Canonical image in the direct sum: per-component exponent sums."""
        self.validate(a)
        out = [0] * self.components
        for c, n in a:
            out[c] += n
        return tuple(out)

    def elements_of_length(self, n: int) -> list:
        if n == 0:
            return [()]
        out = []
        for k in range(1, n + 1):
            for cuts in itertools.combinations(range(1, n), k - 1):
                bounds = (0,) + cuts + (n,)
                exps = [bounds[i + 1] - bounds[i] for i in range(k)]
                for comps in self._component_sequences(k):
                    out.append(tuple(zip(comps, exps)))
        return out

    def _component_sequences(self, k: int) -> Iterator[tuple]:
        def rec(prefix):
            if len(prefix) == k:
                yield tuple(prefix)
                return
            for c in range(self.components):
                if not prefix or prefix[-1] != c:
                    yield from rec(prefix + [c])

        yield from rec([])

    def generator_letters(self, a) -> list[int]:
        self.validate(a)
        return [c for c, n in a for _ in range(n)]

    def random_element(self, rng: np.random.Generator, max_length: int) -> tuple:
        n = int(rng.integers(0, max_length + 1))
        letters = rng.integers(0, self.components, size=n).tolist()
        return self.element(*((c, 1) for c in letters))

    def letter(self, c: int) -> str:
        return _LETTERS[c] if c < len(_LETTERS) else f"g{c}_"

    def format(self, a) -> str:
        if not a:
            return "e"
        return " ".join(f"{self.letter(c)}{n}" for c, n in a)

    def parse(self, text: str) -> tuple:
        text = text.strip()
        if text in ("e", ""):
            return ()
        blocks = []
        for tok in text.split():
            m = re.fullmatch(r"([a-z])(\d*)", tok)
            if not m or m.group(1) not in _LETTERS[: self.components]:
                raise ValueError(f"cannot parse {tok!r} as a block of {self!r}")
            blocks.append((_LETTERS.index(m.group(1)), int(m.group(2) or 1)))
        return self.element(*blocks)

    def to_json(self, a) -> list:
        return [[c, n] for c, n in a]

    def from_json(self, obj) -> tuple:
        return self.element(*[tuple(b) for b in obj])


Monoid = Union[FreeAbelian, FreeProduct]
