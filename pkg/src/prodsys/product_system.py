"""Finite-dimensional lexicographic product systems, optionally twisted.

The fibre over ``t`` is ``C^{d(t)}`` where ``d`` is the multiplicative
extension of the per-generator dimensions.  Multiplying ``u`` in ``E_s`` by
``v`` in ``E_t`` gives the Kronecker product of the coefficient vectors, so
coefficient ``i*d(t) + j`` (0-based) is ``u_i v_j``.  Free-product fibres use
the same rule block by block, which makes the basis of a word the
lexicographic basis of its generator letters.

A twist ``mu`` rescales every product by ``mu(p(u), p(v))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .monoid import FreeAbelian, FreeProduct, Monoid

__all__ = [
    "DEFAULT_CAP",
    "DimensionCapError",
    "FibreVector",
    "Bicharacter",
    "ProductSystem",
    "inner_product",
    "validate_multiplier",
]

DEFAULT_CAP = 4096
DEFAULT_TOL = 1e-9


class DimensionCapError(ValueError):
    """A fibre is larger than the configured dimension cap."""


@dataclass(frozen=True, eq=False)
class FibreVector:
    """A vector in the fibre over ``base``."""

    base: tuple
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __add__(self, other: "FibreVector") -> "FibreVector":
        if other.base != self.base:
            raise ValueError("cannot add vectors in different fibres")
        return FibreVector(self.base, self.coeffs + other.coeffs)

    def __mul__(self, c: complex) -> "FibreVector":
        return FibreVector(self.base, c * self.coeffs)

    __rmul__ = __mul__

    def __repr__(self):
        return f"FibreVector(base={self.base}, coeffs={np.round(self.coeffs, 6).tolist()})"


def inner_product(u: FibreVector, v: FibreVector) -> complex:
    """<u, v>, linear in ``u`` and conjugate-linear in ``v``."""
    if u.base != v.base:
        raise ValueError(f"inner product across fibres {u.base} and {v.base}")
    return complex(np.vdot(v.coeffs, u.coeffs))


@dataclass(frozen=True)
class Bicharacter:
    """mu(s, t) = prod_{a,b} exp(i * phases[a][b] * s_a * t_b).

    On a free product the exponent vectors are the abelianised images, so the
    multiplier is pulled back along the canonical map onto the direct sum.
    ``phases`` are angles in radians.
    """

    phases: tuple

    def __init__(self, phases):
        arr = np.asarray(phases, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("bicharacter phases must be a square matrix")
        object.__setattr__(self, "phases", tuple(map(tuple, arr.tolist())))

    def exponents(self, monoid: Monoid, s) -> np.ndarray:
        if isinstance(monoid, FreeProduct):
            return np.asarray(monoid.theta(s), dtype=float)
        return np.asarray(s, dtype=float)

    def bind(self, monoid: Monoid) -> Callable[[tuple, tuple], complex]:
        P = np.asarray(self.phases)
        if P.shape[0] != monoid.ngens:
            raise ValueError(f"bicharacter has size {P.shape[0]}, monoid has {monoid.ngens} generators")

        def mu(s, t):
            return complex(np.exp(1j * (self.exponents(monoid, s) @ P @ self.exponents(monoid, t))))

        mu.bicharacter = self
        return mu


def validate_multiplier(
    mu: Callable[[tuple, tuple], complex],
    monoid: Monoid,
    samples: int = 200,
    rng: Optional[np.random.Generator] = None,
    max_length: int = 4,
    tol: float = DEFAULT_TOL,
) -> None:
    """Spot-check normalisation, unimodularity and the 2-cocycle identity.

    Raises ValueError naming the first violating pair or triple.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    e = monoid.identity
    for _ in range(samples):
        r, s, t = (monoid.random_element(rng, max_length) for _ in range(3))
        for x in (r, s, t):
            if abs(mu(x, e) - 1) > tol or abs(mu(e, x) - 1) > tol:
                raise ValueError(f"multiplier not normalised at {x}")
        m = mu(r, s)
        if abs(abs(m) - 1) > tol:
            raise ValueError(f"multiplier not unimodular at {(r, s)}")
        lhs = m * mu(monoid.multiply(r, s), t)
        rhs = mu(s, t) * mu(r, monoid.multiply(s, t))
        if abs(lhs - rhs) > tol:
            raise ValueError(f"cocycle identity fails at {(r, s, t)}: {lhs} != {rhs}")


class ProductSystem:
    """Lexicographic product system over ``monoid`` with per-generator ``dims``.

    Parameters
    ----------
    monoid : FreeAbelian or FreeProduct
    dims : sequence of int
        Dimension of the fibre over each generator.
    twist : callable, optional
        A multiplier ``mu(s, t)``.  It is validated on construction unless
        ``validate=False``.
    cap : int
        Largest fibre dimension allowed.
    """

    def __init__(
        self,
        monoid: Monoid,
        dims: Sequence[int],
        twist: Optional[Callable[[tuple, tuple], complex]] = None,
        cap: int = DEFAULT_CAP,
        tol: float = DEFAULT_TOL,
        validate: bool = True,
    ):
        dims = tuple(int(d) for d in dims)
        if len(dims) != monoid.ngens:
            raise ValueError(f"need {monoid.ngens} generator dims, got {len(dims)}")
        if any(d < 1 for d in dims):
            raise ValueError(f"generator dims must be >= 1, got {dims}")
        self.monoid = monoid
        self.dims = dims
        self.twist = twist
        self.cap = cap
        self.tol = tol
        if twist is not None and validate:
            validate_multiplier(twist, monoid, tol=tol)

    def __repr__(self):
        tw = "" if self.twist is None else ", twisted"
        return f"ProductSystem({self.monoid!r}, dims={self.dims}{tw})"

    @classmethod
    def over_N(cls, d: int, **kw) -> "ProductSystem":
        """The unique system over N with a ``d``-dimensional generator fibre."""
        return cls(FreeAbelian(1), (d,), **kw)

    # -- fibres ------------------------------------------------------------

    def mu(self, s, t) -> complex:
        return 1.0 if self.twist is None else self.twist(s, t)

    def fibre_dim(self, t) -> int:
        self.monoid.validate(t)
        if isinstance(self.monoid, FreeAbelian):
            exps = enumerate(t)
        else:
            exps = ((c, n) for c, n in t)
        d = 1
        for g, n in exps:
            if self.dims[g] == 1 or n == 0:
                continue
            # compare exponents first so huge exponents never build huge ints
            if n * np.log(self.dims[g]) > np.log(self.cap) + 1e-9:
                raise DimensionCapError(f"fibre over {t} exceeds cap {self.cap}")
            d *= self.dims[g] ** n
            if d > self.cap:
                raise DimensionCapError(f"fibre over {t} has dimension {d} > cap {self.cap}")
        return d

    def vector(self, t, coeffs) -> FibreVector:
        v = FibreVector(t, coeffs)
        if v.dim != self.fibre_dim(t):
            raise ValueError(f"fibre over {t} has dimension {self.fibre_dim(t)}, got {v.dim} coefficients")
        return v

    def basis_vector(self, t, i: int) -> FibreVector:
        d = self.fibre_dim(t)
        if not 0 <= i < d:
            raise ValueError(f"basis index {i} out of range for a fibre of dimension {d}")
        c = np.zeros(d, dtype=complex)
        c[i] = 1.0
        return FibreVector(t, c)

    def basis(self, t) -> list[FibreVector]:
        return [self.basis_vector(t, i) for i in range(self.fibre_dim(t))]

    @property
    def vacuum(self) -> FibreVector:
        return FibreVector(self.monoid.identity, [1.0])

    def random_vector(self, t, rng: np.random.Generator) -> FibreVector:
        d = self.fibre_dim(t)
        return FibreVector(t, rng.normal(size=d) + 1j * rng.normal(size=d))

    # -- multiplication ----------------------------------------------------

    def multiply(self, u: FibreVector, v: FibreVector) -> FibreVector:
        """The product ``uv`` in the fibre over ``p(u)p(v)``."""
        base = self.monoid.multiply(u.base, v.base)
        self.fibre_dim(base)
        return FibreVector(base, self.mu(u.base, v.base) * np.kron(u.coeffs, v.coeffs))

    def factorize(self, w: FibreVector, s, t) -> np.ndarray:
        """Coefficients ``c`` with ``w = sum_ij c[i, j] (e_i at s)(f_j at t)``."""
        if self.monoid.multiply(s, t) != w.base:
            raise ValueError(f"{self.monoid.format(s)} * {self.monoid.format(t)} != base {w.base}")
        c = w.coeffs.reshape(self.fibre_dim(s), self.fibre_dim(t))
        return np.conj(self.mu(s, t)) * c

    def assemble(self, c: np.ndarray, s, t) -> FibreVector:
        """Inverse of :meth:`factorize`."""
        c = np.asarray(c, dtype=complex)
        base = self.monoid.multiply(s, t)
        return FibreVector(base, self.mu(s, t) * c.reshape(-1))
