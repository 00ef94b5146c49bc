"""Representations given on generators: extension, relation sets and checks.

A representation of a lexicographic product system is fixed by the images
of the generator-fibre basis vectors (a Toeplitz-Cuntz family per
generator).  This module extends such an assignment to every fibre, emits the
multiplication and covariance relations the families must satisfy, and
evaluates those relations numerically.

Finite matrices cannot carry a family of isometries with orthogonal ranges,
so every check reports a deviation, and an assignment may carry an
*interior*: the subspace on which identities are expected to hold exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from . import fock
from .monoid import INFINITY, FreeAbelian
from .product_system import FibreVector, ProductSystem, inner_product
from .report import Report

__all__ = [
    "GeneratorAssignment",
    "Relation",
    "RelationSet",
    "fock_assignment",
    "extend_rep",
    "alpha_phi",
    "gen_mult_relations",
    "gen_isometry_relations",
    "gen_cov_relations",
    "evaluate_relation",
    "check_representation",
    "check_covariance",
    "check_faithfulness_criterion",
    "criterion_string",
    "default_letters",
]

# a letter is (generator, basis index, adjoint); a word is a tuple of letters
Letter = tuple
Word = tuple


def _dense(m) -> np.ndarray:
    return m.toarray() if sp.issparse(m) else np.asarray(m, dtype=complex)


@dataclass
class GeneratorAssignment:
    """Images of the generator basis vectors under a would-be representation.

    ``images[(g, i)]`` is the operator assigned to basis vector ``i`` of the
    fibre over generator ``g``.  ``interior`` is ``None`` (check everywhere),
    a projection matrix, or a callable taking a list of words and returning
    the projection on which those words are exact.
    """

    system: ProductSystem
    images: dict
    interior: Union[None, np.ndarray, Callable] = None
    tol: float = 1e-9
    verified: bool = False

    def __post_init__(self):
        self.images = {k: _dense(v) for k, v in self.images.items()}
        n = self.space_dim
        for (g, i), m in self.images.items():
            if m.shape != (n, n):
                raise ValueError(f"image of ({g},{i}) has shape {m.shape}, expected {(n, n)}")
        for g, d in enumerate(self.system.dims):
            for i in range(d):
                if (g, i) not in self.images:
                    raise ValueError(f"missing image for generator {g}, basis index {i}")

    @property
    def space_dim(self) -> int:
        return next(iter(self.images.values())).shape[0]

    def interior_for(self, words: Sequence[Word]) -> Optional[np.ndarray]:
        if self.interior is None:
            return None
        if callable(self.interior):
            return self.interior(words)
        return _dense(self.interior)

    def word_matrix(self, word: Word) -> np.ndarray:
        out = np.eye(self.space_dim, dtype=complex)
        for g, i, adj in word:
            m = self.images[(g, i)]
            out = out @ (m.conj().T if adj else m)
        return out


def _word_factors(system: ProductSystem, word: Word) -> list:
    M = system.monoid
    return [("annihilate" if adj else "create", M.generator(g)) for g, _, adj in word]


def fock_assignment(trunc: fock.Truncation, tol: float = 1e-9) -> GeneratorAssignment:
    """The left regular representation on ``trunc``, with exact interiors."""
    system = trunc.system
    images = {}
    for g, d in enumerate(system.dims):
        gen = system.monoid.generator(g)
        for i in range(d):
            images[(g, i)] = fock.l_op(trunc, system.basis_vector(gen, i)).dense()

    def interior(words):
        return fock.word_interior(trunc, [_word_factors(system, w) for w in words]).dense()

    a = GeneratorAssignment(system, images, interior, tol=tol)
    a.trunc = trunc
    return a


# -- extension to all fibres ----------------------------------------------

def _letter_products(assignment: GeneratorAssignment, letters: Sequence[int]):
    """All products of generator basis vectors along ``letters``, with their images."""
    system = assignment.system
    M = system.monoid
    states = [(system.vacuum, np.eye(assignment.space_dim, dtype=complex))]
    for g in letters:
        gen = M.generator(g)
        states = [
            (system.multiply(vec, system.basis_vector(gen, i)), mat @ assignment.images[(g, i)])
            for vec, mat in states
            for i in range(system.dims[g])
        ]
    return states


def extend_rep(
    assignment: GeneratorAssignment,
    v: FibreVector,
    order: Optional[Sequence[int]] = None,
    strict: bool = False,
) -> np.ndarray:
    """phi(v), obtained by factoring ``v`` through generator basis vectors.

    ``order`` is the sequence of generator indices to factor along; it
    defaults to the greedy leftmost factorisation.  With ``strict=True`` the
    assignment must have passed :func:`check_representation`.
    """
    if strict and not assignment.verified:
        raise ValueError("assignment has not been verified; run check_representation first")
    M = assignment.system.monoid
    letters = M.generator_letters(v.base) if order is None else list(order)
    if M.from_letters(letters) != v.base:
        raise ValueError(f"letters {letters} do not multiply to {M.format(v.base)}")
    out = np.zeros((assignment.space_dim,) * 2, dtype=complex)
    for vec, mat in _letter_products(assignment, letters):
        c = inner_product(v, vec)
        if c != 0:
            out += c * mat
    return out


def _fibre_images(assignment: GeneratorAssignment, s) -> list:
    M = assignment.system.monoid
    return [mat for _, mat in _letter_products(assignment, M.generator_letters(s))]


def alpha_phi(assignment: GeneratorAssignment, s, A=None) -> np.ndarray:
    """sum_u phi(u) A phi(u)* over an orthonormal basis of E_s (A defaults to I)."""
    A = np.eye(assignment.space_dim, dtype=complex) if A is None else _dense(A)
    out = np.zeros_like(A)
    for m in _fibre_images(assignment, s):
        out += m @ A @ m.conj().T
    return out


# -- relation sets --------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    lhs: Word
    rhs: tuple  # ((coefficient, word), ...); empty means 0
    kind: str

    def words(self) -> list:
        return [self.lhs] + [w for _, w in self.rhs]


def _adjoint(word: Word) -> Word:
    return tuple((g, i, not adj) for g, i, adj in reversed(word))


def _fmt_coef(c: complex) -> str:
    c = complex(round(c.real, 12), round(c.imag, 12))
    if c.imag == 0:
        return f"{c.real:.12g}"
    return f"({c.real:.12g}{c.imag:+.12g}j)"


def _is_one(c: complex) -> bool:
    return abs(c - 1) < 1e-12


def _fmt_word(word: Word) -> str:
    if not word:
        return "I"
    return " ".join(f"S[{g},{i}]{chr(39) if adj else ''}" for g, i, adj in word)


def default_letters(system: ProductSystem) -> tuple:
    n = system.monoid.ngens
    if n == 1:
        return ("V",)
    if n <= 6:
        return tuple("UVWXYZ"[:n])
    return tuple(f"S{g}" for g in range(n))


def _display_word(system, word: Word, letters) -> str:
    if not word:
        return "I"
    out = []
    for g, i, adj in word:
        sub = "" if system.dims[g] == 1 else f"_{i + 1}"
        out.append(f"{letters[g]}{sub}{'^*' if adj else ''}")
    return "".join(out)


class RelationSet:
    """An ordered list of relations in canonical form."""

    def __init__(self, system: ProductSystem, relations: Sequence[Relation]):
        self.system = system
        self.relations = sorted(relations, key=lambda r: (r.kind, r.lhs))

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)

    def of_kind(self, kind: str) -> "RelationSet":
        return RelationSet(self.system, [r for r in self.relations if r.kind == kind])

    def __add__(self, other: "RelationSet") -> "RelationSet":
        return RelationSet(self.system, self.relations + other.relations)

    def to_lines(self) -> list:
        lines = []
        for r in self.relations:
            if not r.rhs:
                rhs = "0"
            else:
                rhs = " + ".join(
                    _fmt_word(w) if _is_one(c) else f"{_fmt_coef(c)} * {_fmt_word(w)}" for c, w in r.rhs
                )
            lines.append(f"{_fmt_word(r.lhs)} = {rhs}")
        return lines

    def to_text(self) -> str:
        return "\n".join(self.to_lines()) + ("\n" if self.relations else "")

    def to_display(self, letters: Optional[Sequence[str]] = None) -> list:
        """Relations in display notation, e.g. ``U_1V_2 = V_1U_2``."""
        letters = default_letters(self.system) if letters is None else letters
        lines = []
        for r in self.relations:
            terms = []
            for c, w in r.rhs:
                pw = _display_word(self.system, w, letters)
                terms.append(pw if _is_one(c) else f"{_fmt_coef(c)}{pw}")
            rhs = " + ".join(terms) if terms else "0"
            lines.append(f"{_display_word(self.system, r.lhs, letters)} = {rhs}")
        return lines

    def to_json(self) -> str:
        def word(w):
            return [{"generator": int(g), "index": int(i), "adjoint": bool(adj)} for g, i, adj in w]

        out = [
            {
                "kind": r.kind,
                "lhs": word(r.lhs),
                "rhs": [{"coeff": [float(c.real), float(c.imag)], "word": word(w)} for c, w in r.rhs],
                "text": line,
            }
            for r, line in zip(self.relations, self.to_lines())
        ]
        return json.dumps(out, indent=2)


def _basis_word(system: ProductSystem, t, idx: int) -> tuple:
    """Write basis vector ``idx`` of E_t as phase * (product of generator basis vectors)."""
    M = system.monoid
    letters = M.generator_letters(t)
    digits, rem = [], idx
    for g in reversed(letters):
        rem, k = divmod(rem, system.dims[g])
        digits.append(k)
    digits.reverse()
    vec = system.vacuum
    for g, k in zip(letters, digits):
        vec = system.multiply(vec, system.basis_vector(M.generator(g), k))
    phase = vec.coeffs[idx]
    return 1 / phase, tuple((g, k, False) for g, k in zip(letters, digits))


def _clean(terms, tol=1e-12) -> tuple:
    acc: dict = {}
    for c, w in terms:
        acc[w] = acc.get(w, 0) + c
    return tuple(sorted(((complex(c), w) for w, c in acc.items() if abs(c) > tol), key=lambda t: t[1]))


def gen_mult_relations(system: ProductSystem) -> RelationSet:
    """Commutation relations between generator families of N^k.

    For generators ``g < h`` and basis indices ``i, j`` the product
    ``e_i^g e_j^h`` is refactored in the order ``h, g``.  Free products
    carry no such relations.
    """
    M = system.monoid
    rels = []
    if isinstance(M, FreeAbelian):
        for g in range(M.ngens):
            for h in range(g + 1, M.ngens):
                gg, hh = M.generator(g), M.generator(h)
                for i in range(system.dims[g]):
                    for j in range(system.dims[h]):
                        x = system.multiply(system.basis_vector(gg, i), system.basis_vector(hh, j))
                        c = system.factorize(x, hh, gg)
                        rhs = _clean((c[a, b], ((h, a, False), (g, b, False))) for a, b in zip(*np.nonzero(c)))
                        rels.append(Relation(((g, i, False), (h, j, False)), rhs, "multiplication"))
    return RelationSet(system, rels)


def gen_isometry_relations(system: ProductSystem) -> RelationSet:
    """phi(e_i)* phi(e_j) = <e_j, e_i> I within each generator fibre."""
    rels = []
    for g, d in enumerate(system.dims):
        for i in range(d):
            for j in range(d):
                rhs = (((1 + 0j), ()),) if i == j else ()
                rels.append(Relation(((g, i, True), (g, j, False)), rhs, "isometry"))
    return RelationSet(system, rels)


def _adjoint_expansion(system: ProductSystem, v: FibreVector, w: FibreVector) -> tuple:
    """The right side of phi(v)* phi(w) = sum <wg, vf> phi(f) phi(g)*."""
    M = system.monoid
    j = M.join(v.base, w.base)
    if j is INFINITY:
        return ()
    fb, gb = M.left_quotient(v.base, j), M.left_quotient(w.base, j)
    terms = []
    for a, f in enumerate(system.basis(fb)):
        vf = system.multiply(v, f)
        pf, wf = _basis_word(system, fb, a)
        for b, g in enumerate(system.basis(gb)):
            c = inner_product(system.multiply(w, g), vf)
            if abs(c) < 1e-14:
                continue
            pg, wg = _basis_word(system, gb, b)
            terms.append((c * pf * np.conj(pg), wf + _adjoint(wg)))
    return _clean(terms)


def gen_cov_relations(system: ProductSystem) -> RelationSet:
    """Adjoint-expansion relations phi(v)* phi(w) between distinct generators.

    For generator basis vectors ``v`` over ``g`` and ``w`` over ``h > g``
    the right side is ``sum_{f,g'} <w g', v f> phi(f) phi(g')*``, or 0 when
    the generators have no common upper bound.
    """
    M = system.monoid
    rels = []
    for g in range(M.ngens):
        for h in range(g + 1, M.ngens):
            gg, hh = M.generator(g), M.generator(h)
            for i in range(system.dims[g]):
                for j in range(system.dims[h]):
                    v, w = system.basis_vector(gg, i), system.basis_vector(hh, j)
                    rhs = _adjoint_expansion(system, v, w)
                    rels.append(Relation(((g, i, True), (h, j, False)), rhs, "covariance"))
    return RelationSet(system, rels)


# -- numerical checks ------------------------------------------------------

def evaluate_relation(assignment: GeneratorAssignment, rel: Relation) -> tuple:
    """Max-abs deviation of ``lhs - rhs`` on the relation's interior, and its dimension."""
    diff = assignment.word_matrix(rel.lhs)
    for c, w in rel.rhs:
        diff = diff - c * assignment.word_matrix(w)
    D = assignment.interior_for(rel.words())
    dim = assignment.space_dim
    if D is not None:
        diff = diff @ D
        dim = int(round(np.trace(D).real))
    dev = float(np.abs(diff).max()) if diff.size else 0.0
    return dev, dim


def _relation_report(assignment, relset: RelationSet, report: Report, label: str, anchor: str):
    for rel, line in zip(relset.relations, relset.to_lines()):
        dev, dim = evaluate_relation(assignment, rel)
        report.add(f"{label}: {line}", anchor, dev, assignment.tol, subspace_dim=dim)


def check_representation(assignment: GeneratorAssignment) -> Report:
    """Multiplicativity on generator pairs plus the isometry and commutation relations."""
    system = assignment.system
    M = system.monoid
    report = Report()
    n = M.ngens
    for g in range(n):
        for h in range(n):
            gg, hh = M.generator(g), M.generator(h)
            for i in range(system.dims[g]):
                for j in range(system.dims[h]):
                    u, v = system.basis_vector(gg, i), system.basis_vector(hh, j)
                    lhs = extend_rep(assignment, system.multiply(u, v))
                    diff = lhs - assignment.images[(g, i)] @ assignment.images[(h, j)]
                    D = assignment.interior_for([((g, i, False), (h, j, False))])
                    dim = assignment.space_dim
                    if D is not None:
                        diff, dim = diff @ D, int(round(np.trace(D).real))
                    report.add(
                        f"multiplicative: phi(e{i}^{g} e{j}^{h})",
                        "phi(uv) = phi(u) phi(v)",
                        float(np.abs(diff).max()),
                        assignment.tol,
                        subspace_dim=dim,
                    )
    _relation_report(assignment, gen_isometry_relations(system), report, "isometry", "phi(v)* phi(u) = <u,v> I")
    _relation_report(
        assignment, gen_mult_relations(system), report, "commutation", "phi(e^g) phi(e^h) refactored in order h, g"
    )
    assignment.verified = report.passed
    return report


def check_covariance(assignment: GeneratorAssignment) -> Report:
    """Adjoint expansion on all generator pairs; vacuous for totally ordered monoids."""
    system = assignment.system
    report = Report()
    if system.monoid.totally_ordered:
        report.add(
            "covariance (totally ordered: automatic)",
            "alpha_s(I) alpha_t(I) = alpha_{s v t}(I)",
            0.0,
            assignment.tol,
            passed=True,
        )
        return report
    _relation_report(
        assignment,
        gen_cov_relations(system),
        report,
        "covariance",
        "phi(v)* phi(w) = sum <wg, vf> phi(f) phi(g)*, or 0 when p(v) v p(w) is infinite",
    )
    return report


def faithfulness_product(assignment: GeneratorAssignment, S: Sequence) -> np.ndarray:
    """prod_{s in S} (I - alpha_phi(s, I))."""
    M = assignment.system.monoid
    I = np.eye(assignment.space_dim, dtype=complex)
    out = I.copy()
    for s in S:
        if s == M.identity:
            raise ValueError("the identity cannot appear in the faithfulness product")
        out = out @ (I - alpha_phi(assignment, s))
    return out


def check_faithfulness_criterion(assignment: GeneratorAssignment, S: Sequence):
    """Whether prod (I - alpha_phi(s, I)) is nonzero, with a witness vector.

    Returns ``(nonzero, witness)`` where ``witness`` is the image of the
    standard basis vector whose image has the largest norm, or ``None``.
    """
    P = faithfulness_product(assignment, S)
    norms = np.linalg.norm(P, axis=0)
    k = int(np.argmax(norms))
    if norms[k] <= assignment.tol:
        return False, None
    return True, P[:, k]


def criterion_string(system: ProductSystem, letters: Optional[Sequence[str]] = None) -> str:
    """The faithfulness criterion spelled out on the generator families."""
    letters = default_letters(system) if letters is None else letters

    def proj(g):
        if system.dims[g] == 1:
            return f"{letters[g]}{letters[g]}^*"
        return None

    if system.monoid.ngens == 1:
        if system.dims[0] == 1:
            return f"{letters[0]}{letters[0]}^* < I"
        return f"\\sum {letters[0]}_k{letters[0]}_k^* < I"
    factors = []
    for g, d in enumerate(system.dims):
        terms = [proj(g)] if d == 1 else [f"{letters[g]}_{i}{letters[g]}_{i}^*" for i in range(1, d + 1)]
        factors.append("(I - " + " - ".join(terms) + ")")
    return "".join(factors) + " \\ne 0"
