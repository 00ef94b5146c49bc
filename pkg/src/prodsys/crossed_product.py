"""Symbolic monomials i_E(u) 1_s i_E(v)* and the grading expectations.

A :class:`MonomialSum` is stored fully expanded over basis vectors: each key
``(p(u), i, s, p(v), j)`` stands for ``i_E(e_i) 1_s i_E(e_j)*``.  Because a
monomial is linear in ``u`` and conjugate-linear in ``v``, this expansion is
a canonical form and symbolic equality becomes a coefficient comparison.
"""

from __future__ import annotations

import re
import weakref
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import scipy.sparse as sp

from . import fock
from .monoid import INFINITY, FreeAbelian, FreeProduct
from .product_system import FibreVector, ProductSystem, inner_product
from .report import Report

__all__ = [
    "Monomial",
    "MonomialSum",
    "monomial_product",
    "monomial_to_fock",
    "phi_delta",
    "phi_theta",
    "phi_l",
    "check_expectation_diagram",
    "fock_interior",
    "degree",
    "random_monomial",
    "random_monomial_sum",
    "parse_monomial_sum",
    "format_monomial_sum",
]

ZERO_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class Monomial:
    u: FibreVector
    s: tuple
    v: FibreVector

    @property
    def degree_pair(self) -> tuple:
        return (self.u.base, self.v.base)


class MonomialSum:
    """A finite combination of basis monomials, keyed by ``(p(u), i, s, p(v), j)``."""

    def __init__(self, system: ProductSystem, terms: Optional[dict] = None):
        self.system = system
        self.terms = {}
        for k, c in (terms or {}).items():
            if abs(c) > ZERO_TOL:
                self.terms[k] = complex(c)

    @classmethod
    def from_monomial(cls, system: ProductSystem, m: Monomial, coeff: complex = 1.0) -> "MonomialSum":
        system.monoid.validate(m.s)
        terms = {}
        for i in np.flatnonzero(m.u.coeffs):
            for j in np.flatnonzero(m.v.coeffs):
                terms[(m.u.base, int(i), m.s, m.v.base, int(j))] = coeff * m.u.coeffs[i] * np.conj(m.v.coeffs[j])
        return cls(system, terms)

    @classmethod
    def unit(cls, system: ProductSystem) -> "MonomialSum":
        e = system.monoid.identity
        return cls(system, {(e, 0, e, e, 0): 1.0})

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0]))

    def __repr__(self):
        return f"MonomialSum({len(self.terms)} terms)"

    def _combine(self, other: "MonomialSum", sign: float) -> "MonomialSum":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + sign * c
        return MonomialSum(self.system, out)

    def __add__(self, other):
        return self._combine(_as_sum(self.system, other), 1.0)

    def __sub__(self, other):
        return self._combine(_as_sum(self.system, other), -1.0)

    def __mul__(self, c):
        return MonomialSum(self.system, {k: complex(c) * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def adjoint(self) -> "MonomialSum":
        return MonomialSum(self.system, {(b, j, s, a, i): np.conj(c) for (a, i, s, b, j), c in self.terms.items()})

    def max_abs_diff(self, other: "MonomialSum") -> float:
        d = self - other
        return max((abs(c) for c in d.terms.values()), default=0.0)

    def select(self, keep) -> "MonomialSum":
        return MonomialSum(self.system, {k: c for k, c in self.terms.items() if keep(k)})


def _as_sum(system, x) -> MonomialSum:
    if isinstance(x, MonomialSum):
        return x
    if isinstance(x, Monomial):
        return MonomialSum.from_monomial(system, x)
    raise TypeError(f"cannot treat {type(x).__name__} as a monomial sum")


def _basis_product(system: ProductSystem, k1: tuple, k2: tuple, out: dict, scale: complex) -> None:
    a, i, s, b, j = k1
    c, k, t, d, l = k2
    M = system.monoid
    J = M.join(b, c)
    if J is INFINITY:
        return
    K = M.join(M.multiply(b, s), M.multiply(c, t))
    if K is INFINITY:
        return
    mid = M.left_quotient(J, K)
    fb, gb = M.left_quotient(b, J), M.left_quotient(c, J)
    u, v = system.basis_vector(a, i), system.basis_vector(b, j)
    w, z = system.basis_vector(c, k), system.basis_vector(d, l)
    vf = [system.multiply(v, f) for f in system.basis(fb)]
    wg = [system.multiply(w, g) for g in system.basis(gb)]
    for fi, f in enumerate(system.basis(fb)):
        for gi, g in enumerate(system.basis(gb)):
            coef = inner_product(wg[gi], vf[fi])
            if abs(coef) < ZERO_TOL:
                continue
            uf, zg = system.multiply(u, f), system.multiply(z, g)
            for p in np.flatnonzero(uf.coeffs):
                for q in np.flatnonzero(zg.coeffs):
                    key = (uf.base, int(p), mid, zg.base, int(q))
                    out[key] = out.get(key, 0) + scale * coef * uf.coeffs[p] * np.conj(zg.coeffs[q])


def monomial_product(x, y, system: Optional[ProductSystem] = None) -> MonomialSum:
    """Product in the crossed product, reduced to a sum of monomials.

    ``(u, s, v)(w, t, z)`` is zero unless ``p(v)s v p(w)t`` is finite, and is
    otherwise the sum over orthonormal bases f of E_{p(v)^-1(p(v) v p(w))} and
    g of E_{p(w)^-1(p(v) v p(w))} of ``<wg, vf> (uf, m, zg)`` with middle
    ``m = (p(v) v p(w))^-1 (p(v)s v p(w)t)``.
    """
    system = system or getattr(x, "system", None) or getattr(y, "system", None)
    if system is None:
        raise ValueError("pass system= when multiplying bare Monomials")
    xs, ys = _as_sum(system, x), _as_sum(system, y)
    if xs.system is not ys.system and (xs.system.monoid != ys.system.monoid or xs.system.dims != ys.system.dims):
        raise ValueError("monomials come from different product systems")
    out: dict = {}
    for k1, c1 in xs.terms.items():
        for k2, c2 in ys.terms.items():
            _basis_product(system, k1, k2, out, c1 * c2)
    return MonomialSum(system, out)


# -- Fock images -------------------------------------------------------------

_L_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _l_basis(trunc: fock.Truncation, base, i: int) -> fock.FockOperator:
    cache = _L_CACHE.setdefault(trunc, {})
    key = (base, i)
    if key not in cache:
        cache[key] = fock.l_op(trunc, trunc.system.basis_vector(base, i))
    return cache[key]


def monomial_to_fock(trunc: fock.Truncation, m) -> fock.FockOperator:
    """l(u) alpha_I(s) l(v)*, summed over the terms of ``m``."""
    ms = _as_sum(trunc.system, m)
    out = fock.zero(trunc)
    for (a, i, s, b, j), c in ms.terms.items():
        for t in (a, b):
            if t not in trunc:
                raise ValueError(f"base {trunc.monoid.format(t)} lies outside the truncation")
        out = out + c * (_l_basis(trunc, a, i) @ fock.alpha_I(trunc, s) @ _l_basis(trunc, b, j).H)
    return out


def _term_word(key) -> list:
    a, _, _, b, _ = key
    return [("create", a), ("diag", None), ("annihilate", b)]


def fock_interior(trunc: fock.Truncation, *sums, products: Iterable = ()) -> fock.FockOperator:
    """Fibres on which the Fock images of the given sums (and products) are exact.

    ``products`` holds tuples of sums whose images are multiplied together;
    every combination of terms along such a product is tracked.
    """
    words = []
    for ms in sums:
        words.extend(_term_word(k) for k in ms.terms)
    for prod in products:
        seqs = [[]]
        for ms in prod:
            seqs = [w + _term_word(k) for w in seqs for k in ms.terms]
        words.extend(seqs)
    return fock.word_interior(trunc, words)


def _labels(trunc: fock.Truncation) -> np.ndarray:
    lab = np.empty(trunc.total_dim, dtype=np.int64)
    for n, t in enumerate(trunc.members):
        lab[trunc.block(t)] = n
    return lab


def phi_l(trunc: fock.Truncation, X: fock.FockOperator) -> fock.FockOperator:
    """sum_s Q_s X Q_s with Q_s the projection onto the fibre over s."""
    lab = _labels(trunc)
    m = sp.coo_matrix(X.matrix)
    keep = lab[m.row] == lab[m.col]
    n = trunc.total_dim
    out = sp.coo_matrix((m.data[keep], (m.row[keep], m.col[keep])), shape=(n, n))
    return fock.FockOperator(out.tocsr(), trunc)


# -- grading expectations ------------------------------------------------------

def phi_delta(ms: MonomialSum) -> MonomialSum:
    """Keep the terms with p(u) = p(v)."""
    return ms.select(lambda k: k[0] == k[3])


def phi_theta(ms: MonomialSum) -> MonomialSum:
    """Keep the terms whose degrees agree after abelianising the free product."""
    M = ms.system.monoid
    if not isinstance(M, FreeProduct):
        raise TypeError("phi_theta needs a free-product monoid")
    return ms.select(lambda k: M.theta(k[0]) == M.theta(k[3]))


def degree(monoid, pu, pv) -> tuple:
    """Abelian fingerprint of the group element p(u) p(v)^-1."""
    if isinstance(monoid, FreeProduct):
        pu, pv = monoid.theta(pu), monoid.theta(pv)
    return tuple(x - y for x, y in zip(pu, pv))


def check_expectation_diagram(trunc: fock.Truncation, ms: MonomialSum, tol: float = 1e-9) -> Report:
    """Compare phi_l of the Fock image with the Fock image of phi_delta, on the interior."""
    lhs = phi_l(trunc, monomial_to_fock(trunc, ms))
    rhs = monomial_to_fock(trunc, phi_delta(ms))
    D = fock_interior(trunc, ms)
    dev = fock.compress(lhs - rhs, D).max_abs()
    report = Report()
    report.add(
        "expectation diagram",
        "Phi_l(pi_l x l(X)) = pi_l x l(Phi_delta(X))",
        dev,
        tol,
        subspace_dim=int(round(D.diagonal().real.sum())),
    )
    return report


# -- sampling and parsing ---------------------------------------------------------

def random_monomial(
    system: ProductSystem,
    rng: np.random.Generator,
    max_length: int = 1,
    middle_length: Optional[int] = None,
    basis: bool = False,
) -> Monomial:
    M = system.monoid
    a, b = M.random_element(rng, max_length), M.random_element(rng, max_length)
    s = M.random_element(rng, max_length if middle_length is None else middle_length)
    if basis:
        u = system.basis_vector(a, int(rng.integers(system.fibre_dim(a))))
        v = system.basis_vector(b, int(rng.integers(system.fibre_dim(b))))
    else:
        u, v = system.random_vector(a, rng), system.random_vector(b, rng)
    return Monomial(u, s, v)


def random_monomial_sum(system: ProductSystem, rng: np.random.Generator, n_terms: int, **kw) -> MonomialSum:
    out = MonomialSum(system)
    for _ in range(n_terms):
        c = complex(rng.normal(), rng.normal())
        out = out + c * MonomialSum.from_monomial(system, random_monomial(system, rng, **kw))
    return out


_TERM = re.compile(
    r"""^\s*(?:(?P<coef>[^*]+?)\s*\*\s*)?
        E\[(?P<u>[^\]:]*):(?P<i>\d+)\]\s*
        (?:\*\s*B\[(?P<s>[^\]]*)\]\s*)?
        \*\s*E\[(?P<v>[^\]:]*):(?P<j>\d+)\]\s*'\s*$""",
    re.VERBOSE,
)


def parse_monomial_sum(system: ProductSystem, text: str) -> MonomialSum:
    """Parse ``c * E[t:i] * B[s] * E[r:j]' + ...`` into a monomial sum.

    ``t:i`` names basis vector ``i`` of the fibre over ``t``; elements use the
    monoid's text syntax, e.g. ``(1,0)`` or ``x2 y1``.  ``B[s]`` defaults to
    the identity and the coefficient to 1.
    """
    M = system.monoid
    out = MonomialSum(system)
    depth, start, parts = 0, 0, []
    for n, ch in enumerate(text):
        depth += ch in "(["
        depth -= ch in ")]"
        if ch == "+" and depth == 0:
            parts.append(text[start:n])
            start = n + 1
    parts.append(text[start:])
    for part in parts:
        m = _TERM.match(part)
        if not m:
            raise ValueError(f"cannot parse monomial term {part.strip()!r}")
        coef = complex(m.group("coef").strip().replace(" ", "")) if m.group("coef") else 1.0
        u = system.basis_vector(M.parse(m.group("u")), int(m.group("i")))
        v = system.basis_vector(M.parse(m.group("v")), int(m.group("j")))
        s = M.parse(m.group("s")) if m.group("s") is not None else M.identity
        out = out + coef * MonomialSum.from_monomial(system, Monomial(u, s, v))
    return out


def _fmt_complex(c: complex) -> str:
    if abs(c.imag) < ZERO_TOL:
        return f"{c.real:.12g}"
    return f"({c.real:.12g}{c.imag:+.12g}j)"


def format_monomial_sum(ms: MonomialSum) -> str:
    """Inverse of :func:`parse_monomial_sum`, in sorted term order; ``0`` if empty."""
    M = ms.system.monoid
    parts = []
    for (a, i, s, b, j), c in ms:
        mid = "" if s == M.identity else f" * B[{M.format(s)}]"
        parts.append(f"{_fmt_complex(c)} * E[{M.format(a)}:{i}]{mid} * E[{M.format(b)}:{j}]'")
    return " + ".join(parts) if parts else "0"
