"""Invariant suites over a truncation, each returning a :class:`Report`.

These drive ``prodsys fock`` and ``prodsys oracle`` and are reused by the
acceptance tests.  Diagonal identities are checked on the whole truncation;
anything involving creation operators is compared on its exact interior.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import fock
from .crossed_product import (
    MonomialSum,
    check_expectation_diagram,
    fock_interior,
    monomial_product,
    monomial_to_fock,
    phi_delta,
    phi_l,
    phi_theta,
    random_monomial,
    random_monomial_sum,
)
from .monoid import INFINITY, FreeAbelian, FreeProduct
from .oracles import UpSets, box_join
from .product_system import ProductSystem, inner_product
from .report import Report
from .reps import check_covariance, check_representation, fock_assignment

EXACT = 1e-12


def _dim(D: fock.FockOperator) -> int:
    return int(round(D.diagonal().real.sum()))


def _generator_basis(system: ProductSystem):
    M = system.monoid
    for g in range(M.ngens):
        yield from system.basis(M.generator(g))


def covariance_suite(trunc: fock.Truncation) -> Report:
    """alpha_I(s) alpha_I(t) against alpha_I(s v t) for every pair of members."""
    M = trunc.monoid
    proj = {t: fock.alpha_I(trunc, t) for t in trunc.members}
    worst, n_inf = 0.0, 0
    for s, t in itertools.product(trunc.members, repeat=2):
        j = M.join(s, t)
        lhs = proj[s] @ proj[t]
        if j is INFINITY:
            n_inf += 1
            worst = max(worst, lhs.max_abs())
        else:
            rhs = proj[j] if j in proj else fock.alpha_I(trunc, j)
            worst = max(worst, (lhs - rhs).max_abs())
    r = Report()
    r.add(
        f"covariance of l on {len(trunc.members)**2} pairs ({n_inf} infinite)",
        "alpha_s(I) alpha_t(I) = alpha_{s v t}(I), or 0 when s v t is infinite",
        worst,
        0.0,
        subspace_dim=trunc.total_dim,
    )
    return r


def isometry_suite(trunc: fock.Truncation) -> Report:
    """l(v)* l(u) = <u, v> I on InteriorDomain(s) for generator basis pairs."""
    system = trunc.system
    worst, dims = 0.0, []
    for g in range(system.monoid.ngens):
        s = system.monoid.generator(g)
        D = fock.interior_domain(trunc, s)
        dims.append(_dim(D))
        I = fock.identity(trunc)
        ops = [(u, fock.l_op(trunc, u)) for u in system.basis(s)]
        for (u, lu), (v, lv) in itertools.product(ops, repeat=2):
            diff = lv.H @ lu - inner_product(u, v) * I
            worst = max(worst, fock.compress(diff, D).max_abs())
    r = Report()
    r.add("isometry relations on interiors", "l(v)* l(u) = <u,v> I", worst, EXACT, subspace_dim=min(dims))
    return r


def annihilation_suite(trunc: fock.Truncation) -> Report:
    """l(v)* kills every fibre E_t with p(v) not <= t."""
    M = trunc.monoid
    worst = 0.0
    for v in _generator_basis(trunc.system):
        lv_adj = fock.l_op(trunc, v).H
        outside = fock.diagonal_projection(trunc, (t for t in trunc.members if not M.leq(v.base, t)))
        worst = max(worst, (lv_adj @ outside).max_abs())
    r = Report()
    r.add("annihilators vanish off p(v)P", "l(v)* w = 0 unless p(v) <= p(w)", worst, 0.0)
    return r


def handy_suite(trunc: fock.Truncation) -> Report:
    """alpha_I(s) l(u) = l(u) alpha_I(p(u)^-1 (p(u) v s)), or 0, on the interior."""
    M = trunc.monoid
    worst, dims = 0.0, []
    for u in _generator_basis(trunc.system):
        lu = fock.l_op(trunc, u)
        D = fock.word_interior(trunc, [[("create", u.base)]])
        dims.append(_dim(D))
        for s in trunc.members:
            lhs = fock.alpha_I(trunc, s) @ lu
            j = M.join(u.base, s)
            if j is INFINITY:
                dev = fock.compress(lhs, D).max_abs()
            else:
                rhs = lu @ fock.alpha_I(trunc, M.left_quotient(u.base, j))
                dev = fock.compress(lhs - rhs, D).max_abs()
            worst = max(worst, dev)
    r = Report()
    r.add(
        "range projections commute past creators",
        "alpha_s(I) l(u) = l(u) alpha_{p(u)^-1(p(u) v s)}(I)",
        worst,
        EXACT,
        subspace_dim=min(dims),
    )
    return r


def faithfulness_vacuum_suite(trunc: fock.Truncation, rng: np.random.Generator, n_sets: int = 50) -> Report:
    """prod (I - alpha_I(s)) over nonidentity members has vacuum entry exactly 1."""
    e = trunc.monoid.identity
    nonid = [t for t in trunc.members if t != e]
    k0 = trunc.offsets[e]
    worst = 0.0
    I = fock.identity(trunc)
    for _ in range(n_sets if nonid else 0):
        size = int(rng.integers(1, min(len(nonid), 6) + 1))
        S = [nonid[i] for i in rng.choice(len(nonid), size=size, replace=False)]
        P = I
        for s in S:
            P = P @ (I - fock.alpha_I(trunc, s))
        worst = max(worst, abs(P.dense()[k0, k0] - 1))
    r = Report()
    r.add(
        "faithfulness product at the vacuum",
        "prod_k (I - alpha_{s_k}(I)) Omega = Omega",
        worst,
        0.0,
        witness=trunc.vacuum(),
    )
    return r


def random_subset_family(monoid, rng: np.random.Generator, size: int, max_length: int) -> list:
    """``size`` distinct elements of length <= max_length (fewer if the pool is smaller)."""
    pool = monoid.elements_up_to(max_length)
    idx = rng.choice(len(pool), size=min(size, len(pool)), replace=False)
    return [pool[i] for i in idx]


def q_a_suite(trunc: fock.Truncation, rng: np.random.Generator, n_sets: int = 50, max_size: int = 4, max_length=None) -> Report:
    """Orthogonality, completeness, support and pointwise rule of the Q_A family."""
    M = trunc.monoid
    if max_length is None:
        # keep every join sigma(A) inside the truncation
        max_length = max(1, trunc.L // max_size)
    I = fock.identity(trunc)
    dev_orth = dev_sum = dev_point = 0.0
    support_ok = True
    for _ in range(n_sets):
        F = random_subset_family(M, rng, int(rng.integers(1, max_size + 1)), max_length)
        subsets = [list(A) for r in range(len(F) + 1) for A in itertools.combinations(F, r)]
        Q = [fock.q_a(trunc, F, A) for A in subsets]
        total = fock.zero(trunc)
        for A, q in zip(subsets, Q):
            total = total + q
            dev_point = max(dev_point, (q - fock.q_a_pointwise(trunc, F, A)).max_abs())
            nonzero = q.max_abs() > 0
            support_ok &= nonzero == fock.is_initial_segment(M, F, A)
        for i, j in itertools.combinations(range(len(Q)), 2):
            dev_orth = max(dev_orth, (Q[i] @ Q[j]).max_abs())
        dev_sum = max(dev_sum, (total - I).max_abs())
    r = Report()
    anchor = "Q_A = 1_{sigma A} prod_{t in F \\ A} (1 - 1_t)"
    r.add("Q_A pairwise orthogonal", anchor, dev_orth, 0.0)
    r.add("Q_A sum to identity", anchor, dev_sum, 0.0)
    r.add("Q_A nonzero iff A is an initial segment", anchor, 0.0 if support_ok else 1.0, 0.0, passed=support_ok)
    r.add("Q_A formula matches pointwise rule", "Q_A(s) = 1 iff A = {t in F : t <= s}", dev_point, 0.0)
    return r


def monomial_fock_suite(trunc: fock.Truncation, rng: np.random.Generator, n_pairs: int = 200, tol: float = 1e-9) -> Report:
    """Fock image of the symbolic product against the product of Fock images."""
    system = trunc.system
    worst, dims = 0.0, []
    for _ in range(n_pairs):
        m1 = MonomialSum.from_monomial(system, random_monomial(system, rng))
        m2 = MonomialSum.from_monomial(system, random_monomial(system, rng))
        p = monomial_product(m1, m2)
        D = fock_interior(trunc, p, products=[(m1, m2)])
        dims.append(_dim(D))
        diff = monomial_to_fock(trunc, p) - monomial_to_fock(trunc, m1) @ monomial_to_fock(trunc, m2)
        worst = max(worst, fock.compress(diff, D).max_abs())
    r = Report()
    r.add(
        f"monomial product vs Fock product ({n_pairs} pairs)",
        "(u,s,v)(w,t,z) = sum <wg,vf> (uf, (p(v) v p(w))^-1 (p(v)s v p(w)t), zg)",
        worst,
        tol,
        subspace_dim=min(dims) if dims else None,
    )
    return r


def expectation_suite(trunc: fock.Truncation, rng: np.random.Generator, n_sums: int = 100, n_terms: int = 10, tol: float = 1e-9) -> Report:
    """Phi_l intertwines Phi_delta; Phi_l idempotent and faithful on positives; Phi_delta Phi_theta = Phi_delta."""
    system = trunc.system
    M = system.monoid
    worst_diag = worst_idem = worst_grading = 0.0
    faithful = True
    dims = []
    for _ in range(n_sums):
        ms = random_monomial_sum(system, rng, n_terms)
        rep = check_expectation_diagram(trunc, ms, tol)
        worst_diag = max(worst_diag, rep.max_deviation)
        dims.append(rep.records[0].subspace_dim)
        X = monomial_to_fock(trunc, ms)
        PX = phi_l(trunc, X)
        worst_idem = max(worst_idem, (phi_l(trunc, PX) - PX).max_abs())
        if X.max_abs() > tol:
            faithful &= phi_l(trunc, X.H @ X).max_abs() > tol
        if isinstance(M, FreeProduct):
            worst_grading = max(worst_grading, phi_delta(phi_theta(ms)).max_abs_diff(phi_delta(ms)))
    r = Report()
    r.add(
        f"expectation diagram ({n_sums} sums)",
        "Phi_l o (pi_l x l) = (pi_l x l) o Phi_delta",
        worst_diag,
        tol,
        subspace_dim=min(dims),
    )
    r.add("Phi_l idempotent", "Phi_l o Phi_l = Phi_l", worst_idem, EXACT)
    r.add("Phi_l faithful on positives", "Phi_l(X* X) = 0 implies X = 0", 0.0 if faithful else 1.0, 0.0, passed=faithful)
    if isinstance(M, FreeProduct):
        r.add("Phi_delta o Phi_theta = Phi_delta", "theta-grading refines to the full grading", worst_grading, EXACT)
    return r


def cocycle_suite(system: ProductSystem, rng: np.random.Generator, n_triples: int = 100, max_length: int = 2) -> Report:
    """Associativity of fibre multiplication and multiplicativity of norms."""
    M = system.monoid
    worst_assoc = worst_norm = 0.0
    for _ in range(n_triples):
        r, s, t = (M.random_element(rng, max_length) for _ in range(3))
        u, v, w = (system.random_vector(x, rng) for x in (r, s, t))
        a = system.multiply(system.multiply(u, v), w).coeffs
        b = system.multiply(u, system.multiply(v, w)).coeffs
        worst_assoc = max(worst_assoc, float(np.abs(a - b).max()) / max(1.0, float(np.abs(a).max())))
        uv = system.multiply(u, v)
        worst_norm = max(worst_norm, abs(uv.norm() - u.norm() * v.norm()) / (u.norm() * v.norm()))
    rep = Report()
    rep.add("associativity of fibre products", "(uv)w = u(vw)", worst_assoc, EXACT)
    rep.add("norm multiplicativity", "|uv| = |u| |v|", worst_norm, EXACT)
    return rep


def representation_suite(trunc: fock.Truncation) -> Report:
    a = fock_assignment(trunc)
    return check_representation(a).extend(check_covariance(a))


def fock_suite(system: ProductSystem, L: int, seed: int = 0, tol: float = 1e-9, samples: int = 20) -> Report:
    """Every truncated-Fock invariant for one system; used by ``prodsys fock``."""
    rng = np.random.default_rng(seed)
    trunc = fock.build_truncation(system, L)
    report = Report()
    report.add(
        f"truncation L={L}: {len(trunc.members)} fibres",
        "S(E) = (+)_t E_t, |t| <= L",
        0.0,
        tol,
        subspace_dim=trunc.total_dim,
        passed=True,
    )
    report.extend(covariance_suite(trunc))
    report.extend(isometry_suite(trunc))
    report.extend(annihilation_suite(trunc))
    report.extend(handy_suite(trunc))
    report.extend(representation_suite(trunc))
    report.extend(faithfulness_vacuum_suite(trunc, rng, samples))
    qtrunc = trunc if L >= 4 else fock.build_truncation(ProductSystem(system.monoid, (1,) * system.monoid.ngens), 4)
    report.extend(q_a_suite(qtrunc, rng, n_sets=samples))
    if L >= 1:
        report.extend(monomial_fock_suite(trunc, rng, n_pairs=samples, tol=tol))
        report.extend(expectation_suite(trunc, rng, n_sums=samples, n_terms=5, tol=tol))
    report.extend(cocycle_suite(system, rng, n_triples=samples))
    return report


# -- order oracles -----------------------------------------------------------

def join_oracle_suite(monoid, max_length: int = 5) -> Report:
    """Exhaustive leq/join agreement on all pairs of words of length <= max_length."""
    elems = monoid.elements_up_to(max_length)
    up = UpSets(monoid, 2 * max_length)
    bad_leq = bad_join = 0
    for a, b in itertools.product(elems, repeat=2):
        bad_leq += monoid.leq(a, b) != up.leq(a, b)
        bad_join += monoid.join(a, b) != up.join(a, b)
    n = len(elems) ** 2
    # sigma on triples short enough that the bound still covers their joins
    short = monoid.elements_up_to(2 * max_length // 3)
    bad_sigma = 0
    for triple in itertools.product(short, repeat=3):
        common = frozenset.intersection(*(up.up(a) for a in triple))
        brute = INFINITY if not common else next(x for x in common if common <= up.up(x))
        bad_sigma += monoid.sigma(triple) != brute
    m = len(short) ** 3
    r = Report()
    r.add(f"leq vs brute force ({n} pairs)", "s <= t iff s c = t for some c", bad_leq / n, 0.0)
    r.add(f"join vs brute force ({n} pairs)", "s v t is the least common upper bound", bad_join / n, 0.0)
    r.add(f"sigma vs brute force ({m} triples)", "sigma A is the least common upper bound of A", bad_sigma / m, 0.0)
    return r


def random_join_suite(monoid: FreeAbelian, rng: np.random.Generator, n_pairs: int = 1000, max_exp: int = 3) -> Report:
    bad = 0
    for _ in range(n_pairs):
        a = tuple(rng.integers(0, max_exp + 1, size=monoid.rank).tolist())
        b = tuple(rng.integers(0, max_exp + 1, size=monoid.rank).tolist())
        bad += monoid.join(a, b) != box_join(a, b)
    r = Report()
    r.add(f"join in N^{monoid.rank} vs box search ({n_pairs} pairs)", "coordinatewise max", bad / n_pairs, 0.0)
    return r


def theta_pairs(monoid: FreeProduct, rng: np.random.Generator, n_pairs: int, max_length: int = 4):
    """Random pairs, half of them forced comparable so joins are often finite."""
    for k in range(n_pairs):
        s = monoid.random_element(rng, max_length)
        if k % 2:
            t = monoid.multiply(s, monoid.random_element(rng, max_length))
            if rng.integers(2):
                s, t = t, s
        else:
            t = monoid.random_element(rng, max_length)
        yield s, t


def theta_suite(monoid: FreeProduct, rng: np.random.Generator, n_pairs: int = 1000) -> Report:
    A = monoid.abelianization
    bad_join = bad_inj = bad_hom = finite = 0
    for s, t in theta_pairs(monoid, rng, n_pairs):
        bad_hom += monoid.theta(monoid.multiply(s, t)) != A.multiply(monoid.theta(s), monoid.theta(t))
        j = monoid.join(s, t)
        if j is INFINITY:
            continue
        finite += 1
        bad_join += monoid.theta(j) != A.join(monoid.theta(s), monoid.theta(t))
        bad_inj += monoid.theta(s) == monoid.theta(t) and s != t
    r = Report()
    r.add(f"theta homomorphism ({n_pairs} pairs)", "theta(st) = theta(s) + theta(t)", bad_hom / n_pairs, 0.0)
    r.add(f"theta preserves finite joins ({finite} finite)", "theta(s v t) = theta(s) v theta(t)", bad_join, 0.0)
    r.add("theta injective on comparable pairs", "theta(s) = theta(t) implies s = t", bad_inj, 0.0)
    return r


def oracle_suite(system: ProductSystem, seed: int = 0, n_pairs: int = 1000, n_monomials: int = 200, max_length: int = 5, L: int = 3, tol: float = 1e-9) -> Report:
    """Brute-force cross-checks; used by ``prodsys oracle``."""
    rng = np.random.default_rng(seed)
    M = system.monoid
    report = Report()
    if isinstance(M, FreeProduct):
        report.extend(join_oracle_suite(M, max_length))
        report.extend(theta_suite(M, rng, n_pairs))
    else:
        report.extend(join_oracle_suite(M, min(max_length, 4 if M.rank <= 2 else 3)))
        report.extend(random_join_suite(M, rng, n_pairs))
    trunc = fock.build_truncation(system, L)
    report.extend(monomial_fock_suite(trunc, rng, n_monomials, tol))
    return report
