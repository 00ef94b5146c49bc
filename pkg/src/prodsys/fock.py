"""Truncated left regular representation on S(E) = (+)_t E_t.

A :class:`Truncation` keeps the fibres over all elements of word length at
most ``L``.  That set is closed under left divisors and under taking right
factors, so annihilation operators ``l(v)*`` and all diagonal projections are
exact on it; only creation operators can leave the truncation.  Identities
that involve creation are therefore compared on an *interior*: the fibres
whose image under every creation step stays inside the truncation.

Operators are stored sparse (CSR) above ``DENSE_BELOW`` rows and as dense
arrays below it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .monoid import INFINITY
from .product_system import DimensionCapError, FibreVector, ProductSystem

__all__ = [
    "DENSE_BELOW",
    "Truncation",
    "FockOperator",
    "build_truncation",
    "identity",
    "l_op",
    "alpha_I",
    "alpha",
    "rho",
    "beta",
    "diagonal_projection",
    "interior_domain",
    "word_interior",
    "compress",
    "is_initial_segment",
    "q_a",
    "q_a_pointwise",
    "pi_l",
    "tau",
    "d_small",
    "q_prime",
    "fibre_projection",
    "export_triplets",
]

DENSE_BELOW = 64


@dataclass(frozen=True, eq=False)
class Truncation:
    system: ProductSystem
    L: int
    members: tuple
    offsets: Mapping
    dims: Mapping
    total_dim: int

    def __contains__(self, t) -> bool:
        return t in self.offsets

    def block(self, t) -> slice:
        o = self.offsets[t]
        return slice(o, o + self.dims[t])

    @property
    def monoid(self):
        return self.system.monoid

    def vacuum(self) -> np.ndarray:
        x = np.zeros(self.total_dim, dtype=complex)
        x[self.offsets[self.monoid.identity]] = 1.0
        return x

    def embed(self, v: FibreVector) -> np.ndarray:
        """The vector ``v`` as an element of the truncated Fock space."""
        x = np.zeros(self.total_dim, dtype=complex)
        x[self.block(v.base)] = v.coeffs
        return x

    def fibre_of_index(self, k: int):
        for t in self.members:
            if self.offsets[t] <= k < self.offsets[t] + self.dims[t]:
                return t, k - self.offsets[t]
        raise IndexError(k)


def build_truncation(system: ProductSystem, L: int) -> Truncation:
    """Fibres over all elements of word length ``<= L``, ordered by (length, lex)."""
    if L < 0:
        raise ValueError("truncation bound must be non-negative")
    members = tuple(system.monoid.elements_up_to(L))
    offsets, dims, o = {}, {}, 0
    for t in members:
        d = system.fibre_dim(t)
        offsets[t], dims[t] = o, d
        o += d
    if o > system.cap * 16:
        raise DimensionCapError(f"truncated Fock space has dimension {o}")
    return Truncation(system, L, members, offsets, dims, o)


class FockOperator:
    """A matrix on the truncated Fock space, tagged with its truncation."""

    __array_priority__ = 20

    def __init__(self, matrix, trunc: Truncation):
        n = trunc.total_dim
        if matrix.shape != (n, n):
            raise ValueError(f"operator shape {matrix.shape} does not match dimension {n}")
        if n < DENSE_BELOW:
            matrix = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix, dtype=complex)
        else:
            matrix = sp.csr_matrix(matrix, dtype=complex)
        self.matrix = matrix
        self.trunc = trunc

    @property
    def shape(self):
        return self.matrix.shape

    def dense(self) -> np.ndarray:
        return self.matrix.toarray() if sp.issparse(self.matrix) else np.array(self.matrix)

    @property
    def H(self) -> "FockOperator":
        return FockOperator(self.matrix.conj().T, self.trunc)

    def _coerce(self, other):
        if isinstance(other, FockOperator):
            if other.trunc is not self.trunc:
                raise ValueError("operators live on different truncations")
            return other.matrix
        return other

    def __matmul__(self, other):
        if isinstance(other, np.ndarray) and other.ndim == 1:
            return np.asarray(self.matrix @ other).reshape(-1)
        return FockOperator(self.matrix @ self._coerce(other), self.trunc)

    def __add__(self, other):
        return FockOperator(_add(self.matrix, self._coerce(other)), self.trunc)

    def __sub__(self, other):
        return FockOperator(_add(self.matrix, -self._coerce(other)), self.trunc)

    def __neg__(self):
        return FockOperator(-self.matrix, self.trunc)

    def __mul__(self, c):
        return FockOperator(self.matrix * complex(c), self.trunc)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        m = self.matrix
        if sp.issparse(m):
            return float(abs(m).max()) if m.nnz else 0.0
        return float(np.abs(m).max()) if m.size else 0.0

    def diagonal(self) -> np.ndarray:
        return np.asarray(self.matrix.diagonal()).reshape(-1)

    def __repr__(self):
        kind = "sparse" if sp.issparse(self.matrix) else "dense"
        return f"FockOperator({self.shape[0]}x{self.shape[1]}, {kind})"


def _add(a, b):
    if sp.issparse(a) and not sp.issparse(b):
        return a.toarray() + b
    if sp.issparse(b) and not sp.issparse(a):
        return a + b.toarray()
    return a + b


def identity(trunc: Truncation) -> FockOperator:
    return FockOperator(sp.identity(trunc.total_dim, dtype=complex, format="csr"), trunc)


def zero(trunc: Truncation) -> FockOperator:
    return FockOperator(sp.csr_matrix((trunc.total_dim, trunc.total_dim), dtype=complex), trunc)


def diagonal_projection(trunc: Truncation, keep: Iterable) -> FockOperator:
    """Projection onto the fibres over the elements in ``keep``."""
    diag = np.zeros(trunc.total_dim, dtype=complex)
    for t in keep:
        if t in trunc:
            diag[trunc.block(t)] = 1.0
    return FockOperator(sp.diags(diag, format="csr"), trunc)


fibre_projection = diagonal_projection


def l_op(trunc: Truncation, v: FibreVector) -> FockOperator:
    """Left multiplication by ``v``, cut off where ``p(v)t`` leaves the truncation."""
    system, M = trunc.system, trunc.monoid
    rows, cols, vals = [], [], []
    nz = np.flatnonzero(v.coeffs)
    for t in trunc.members:
        target = M.multiply(v.base, t)
        if target not in trunc:
            continue
        dt = trunc.dims[t]
        scale = system.mu(v.base, t)
        for i in nz:
            rows.append(trunc.offsets[target] + i * dt + np.arange(dt))
            cols.append(trunc.offsets[t] + np.arange(dt))
            vals.append(np.full(dt, scale * v.coeffs[i]))
    n = trunc.total_dim
    if not rows:
        return zero(trunc)
    m = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    return FockOperator(m.tocsr(), trunc)


def alpha_I(trunc: Truncation, s) -> FockOperator:
    """Projection onto the fibres over ``t`` with ``s <= t``."""
    M = trunc.monoid
    return diagonal_projection(trunc, (t for t in trunc.members if M.leq(s, t)))


def alpha(trunc: Truncation, s, A: FockOperator) -> FockOperator:
    """sum over an orthonormal basis u of E_s of l(u) A l(u)*."""
    out = zero(trunc)
    for u in trunc.system.basis(s):
        lu = l_op(trunc, u)
        out = out + lu @ A @ lu.H
    return out


def rho(trunc: Truncation, t, M: np.ndarray) -> FockOperator:
    """Image of the matrix ``M`` on E_t: sum_{u,v} M[u,v] l(u) l(v)*."""
    M = np.asarray(M, dtype=complex)
    d = trunc.system.fibre_dim(t)
    if M.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix for the fibre over {t}, got {M.shape}")
    basis = [l_op(trunc, u) for u in trunc.system.basis(t)]
    out = zero(trunc)
    for i, j in zip(*np.nonzero(M)):
        out = out + M[i, j] * (basis[i] @ basis[j].H)
    return out


def beta(system: ProductSystem, t, s, M: np.ndarray) -> np.ndarray:
    """``M`` on E_s amplified to ``M (x) I`` on E_t = E_s E_{s^-1 t}."""
    if not system.monoid.leq(s, t):
        raise ValueError(f"{system.monoid.format(s)} is not <= {system.monoid.format(t)}")
    M = np.asarray(M, dtype=complex)
    ds = system.fibre_dim(s)
    if M.shape != (ds, ds):
        raise ValueError(f"expected a {ds}x{ds} matrix, got {M.shape}")
    r = system.monoid.left_quotient(s, t)
    return np.kron(M, np.eye(system.fibre_dim(r)))


# -- interiors -----------------------------------------------------------

def interior_domain(trunc: Truncation, s) -> FockOperator:
    """Projection onto the fibres over ``t`` with ``s t`` still in the truncation."""
    M = trunc.monoid
    return diagonal_projection(trunc, (t for t in trunc.members if M.multiply(s, t) in trunc))


Factor = tuple  # ("create", base) | ("annihilate", base) | ("diag", None)


def _survives(trunc: Truncation, word: Sequence[Factor], t) -> bool:
    M = trunc.monoid
    cur = t
    for kind, p in reversed(word):
        if kind == "annihilate":
            if not M.leq(p, cur):
                return True  # exact zero on both sides
            cur = M.left_quotient(p, cur)
        elif kind == "create":
            cur = M.multiply(p, cur)
            if cur not in trunc:
                return False
    return True


def word_interior(trunc: Truncation, words: Iterable[Sequence[Factor]]) -> FockOperator:
    """Fibres on which every given operator word is computed exactly.

    Each word is a left-to-right sequence of factors ``("create", p)`` for
    ``l(u)`` with ``p(u) = p``, ``("annihilate", p)`` for ``l(u)*`` and
    ``("diag", None)`` for a diagonal projection.
    """
    words = [list(w) for w in words]
    keep = [t for t in trunc.members if all(_survives(trunc, w, t) for w in words)]
    return diagonal_projection(trunc, keep)


def compress(X: FockOperator, D: FockOperator) -> FockOperator:
    """Restrict ``X`` to the domain picked out by the diagonal projection ``D``."""
    return X @ D


# -- B_P and the Q_A calculus -----------------------------------------------

def is_initial_segment(monoid, F: Sequence, A: Sequence) -> bool:
    a = monoid.sigma(A)
    if a is INFINITY:
        return False
    return set(A) == {t for t in F if monoid.leq(t, a)}


def q_a(trunc: Truncation, F: Sequence, A: Sequence) -> FockOperator:
    """pi_l(Q_A) = alpha_I(sigma A) prod_{t in F \\ A} (I - alpha_I(t)), or 0."""
    M = trunc.monoid
    F, A = list(F), list(A)
    if not set(A) <= set(F):
        raise ValueError("A must be a subset of F")
    a = M.sigma(A)
    if a is INFINITY:
        return zero(trunc)
    I = identity(trunc)
    out = alpha_I(trunc, a)
    for t in F:
        if t not in A:
            out = out @ (I - alpha_I(trunc, t))
    return out


def q_a_pointwise(trunc: Truncation, F: Sequence, A: Sequence) -> FockOperator:
    """Diagonal projection that is 1 on E_s exactly when A = {t in F : t <= s}."""
    M = trunc.monoid
    A = set(A)
    return diagonal_projection(trunc, (s for s in trunc.members if {t for t in F if M.leq(t, s)} == A))


Combo = Union[Mapping, Sequence]


def _combo_items(combo: Combo):
    return combo.items() if isinstance(combo, Mapping) else combo


def pi_l(trunc: Truncation, combo: Combo) -> FockOperator:
    """Image of sum_t c_t 1_t, given as ``{t: c_t}`` or ``[(t, c_t), ...]``."""
    out = zero(trunc)
    for t, c in _combo_items(combo):
        if t is INFINITY:
            continue
        out = out + complex(c) * alpha_I(trunc, t)
    return out


def tau(monoid, s, combo: Combo) -> dict:
    """Left translation on B_P: 1_t -> 1_{st}."""
    out: dict = {}
    for t, c in _combo_items(combo):
        st = monoid.multiply(s, t)
        out[st] = out.get(st, 0) + c
    return out


def d_small(monoid, b, c, a):
    """The non-identity element separating b^-1 a from c^-1 a.

    With x = b^-1 a, y = c^-1 a and j = x v y, returns x^-1 j when x < j and
    y^-1 j otherwise.
    """
    if b == c:
        raise ValueError("b and c must differ")
    if not (monoid.leq(b, a) and monoid.leq(c, a)):
        raise ValueError("b and c must both be <= a")
    x, y = monoid.left_quotient(b, a), monoid.left_quotient(c, a)
    j = monoid.join(x, y)
    if j is INFINITY:
        raise ValueError("b^-1 a and c^-1 a have no common upper bound")
    if monoid.lt(x, j):
        return monoid.left_quotient(x, j)
    return monoid.left_quotient(y, j)


def q_prime(trunc: Truncation, F: Sequence, A: Sequence, return_parts: bool = False):
    """The projection Q = alpha_a(Q') with a = sigma A, and optionally R = alpha_a(R').

    Q' is the product of I - alpha_I(a^-1(a v t)) over t in F with
    a < a v t < infinity, times the product of I - alpha_I(d_{b,c}) over
    distinct b, c in A whose quotients b^-1 a, c^-1 a have a finite join.
    """
    M = trunc.monoid
    F, A = list(F), list(A)
    if not is_initial_segment(M, F, A):
        raise ValueError("A is not an initial segment of F")
    a = M.sigma(A)
    I = identity(trunc)
    t_part = I
    for t in F:
        j = M.join(a, t)
        if j is not INFINITY and M.lt(a, j):
            t_part = t_part @ (I - alpha_I(trunc, M.left_quotient(a, j)))
    r_part = I
    for b, c in itertools.permutations(A, 2):
        x, y = M.left_quotient(b, a), M.left_quotient(c, a)
        if M.join(x, y) is INFINITY:
            continue
        r_part = r_part @ (I - alpha_I(trunc, d_small(M, b, c, a)))
    Q = alpha(trunc, a, t_part @ r_part)
    if return_parts:
        return Q, alpha(trunc, a, r_part)
    return Q


def export_triplets(op: FockOperator, path, tol: float = 0.0) -> int:
    """Write ``row col re im`` lines for the nonzero entries; returns the count."""
    m = sp.coo_matrix(op.matrix)
    n = 0
    with open(path, "w") as fh:
        fh.write(f"# {op.shape[0]} {op.shape[1]}\n")
        for r, c, v in zip(m.row, m.col, m.data):
            if abs(v) > tol:
                fh.write(f"{r} {c} {float(v.real)!r} {float(v.imag)!r}\n")
                n += 1
    return n
