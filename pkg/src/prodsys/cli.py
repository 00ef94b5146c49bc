"""Command-line front end: ``prodsys <command> SPEC ...``.

Exit status is 0 when every check passes, 1 when some check fails and 2 for
invalid input (bad system description, unparsable element, dimension cap exceeded).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fock, suites
from .crossed_product import (
    check_expectation_diagram,
    format_monomial_sum,
    parse_monomial_sum,
    phi_delta,
    phi_theta,
)
from .monoid import FreeProduct
from .report import Report
from .reps import (
    GeneratorAssignment,
    RelationSet,
    check_faithfulness_criterion,
    criterion_string,
    faithfulness_product,
    fock_assignment,
    gen_cov_relations,
    gen_isometry_relations,
    gen_mult_relations,
)
from .specfile import SpecError, load_spec

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _emit_report(report: Report, json_path) -> int:
    print(report.table())
    if json_path:
        Path(json_path).write_text(report.to_json() + "\n")
    status = "all checks passed" if report.passed else f"{len(report.failures())} check(s) failed"
    print(f"{len(report)} checks, {status}")
    return EXIT_OK if report.passed else EXIT_FAIL


# -- commands ---------------------------------------------------------------

def cmd_relations(args) -> int:
    spec = load_spec(args.spec)
    system = spec.system
    if isinstance(system.monoid, FreeProduct):
        mult = RelationSet(system, [])  # free generators satisfy no commutation relations
    else:
        mult = gen_mult_relations(system)
    adj = gen_isometry_relations(system) + gen_cov_relations(system)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for stem, rels in (("multiplication", mult), ("adjoint", adj)):
        (out / f"{stem}.txt").write_text(rels.to_text())
        (out / f"{stem}.json").write_text(rels.to_json() + "\n")
    letters = args.letters.split(",") if args.letters else None
    print(f"# multiplication relations ({len(mult)})")
    for line in mult.to_display(letters):
        print(line)
    print(f"# covariance relations ({len(adj.of_kind('covariance'))})")
    for line in adj.of_kind("covariance").to_display(letters):
        print(line)
    print(f"# isometry relations ({len(adj.of_kind('isometry'))})")
    for line in adj.of_kind("isometry").to_display(letters):
        print(line)
    print(f"wrote {out}/multiplication.{{txt,json}} and {out}/adjoint.{{txt,json}}")
    return EXIT_OK


def cmd_fock(args) -> int:
    spec = load_spec(args.spec)
    L = spec.L if args.L is None else args.L
    report = suites.fock_suite(spec.system, L, seed=spec.seed, tol=spec.tol, samples=args.samples)
    if args.export:
        trunc = fock.build_truncation(spec.system, L)
        out = Path(args.export)
        out.mkdir(parents=True, exist_ok=True)
        M = spec.monoid
        for g, d in enumerate(spec.system.dims):
            for i in range(d):
                op = fock.l_op(trunc, spec.system.basis_vector(M.generator(g), i))
                fock.export_triplets(op, out / f"l_g{g}_{i}.txt")
    return _emit_report(report, args.json)


def cmd_join(args) -> int:
    spec = load_spec(args.spec)
    M = spec.monoid
    elems = [M.parse(t) for t in args.elements]
    names = [M.format(a) for a in elems]
    if len(elems) >= 2:
        for n in range(len(elems)):
            for k in range(n + 1, len(elems)):
                j = M.join(elems[n], elems[k])
                print(f"join({names[n]}, {names[k]}) = {M.format_join(j)}")
    print(f"sigma{{{', '.join(names)}}} = {M.format_join(M.sigma(elems))}")
    if isinstance(M, FreeProduct):
        A = M.abelianization
        for a, name in zip(elems, names):
            print(f"theta({name}) = {A.format(M.theta(a))}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = load_spec(args.spec)
    report = suites.oracle_suite(
        spec.system,
        seed=spec.seed,
        n_pairs=args.pairs,
        n_monomials=args.monomials,
        max_length=args.max_length,
        L=3 if args.L is None else args.L,
        tol=spec.tol,
    )
    return _emit_report(report, args.json)


def load_assignment(system, path) -> GeneratorAssignment:
    """Read generator images from an ``.npz`` with arrays ``g{g}_{i}`` and optional ``interior``."""
    data = np.load(path)
    images = {}
    for g, d in enumerate(system.dims):
        for i in range(d):
            key = f"g{g}_{i}"
            if key not in data:
                raise ValueError(f"{path}: missing array {key!r}")
            images[(g, i)] = data[key]
    interior = data["interior"] if "interior" in data else None
    return GeneratorAssignment(system, images, interior)


def _format_witness(vec, trunc=None, limit: int = 8) -> str:
    nz = np.flatnonzero(np.abs(vec) > 1e-12)
    parts = []
    for k in nz[:limit]:
        if trunc is not None:
            t, i = trunc.fibre_of_index(int(k))
            label = f"{trunc.monoid.format(t)}:{i}"
        else:
            label = str(int(k))
        c = complex(vec[k])
        parts.append(f"{label} -> {c.real:.6g}{c.imag:+.6g}j")
    more = f" (+{len(nz) - limit} more)" if len(nz) > limit else ""
    return ", ".join(parts) + more


def cmd_faithful(args) -> int:
    spec = load_spec(args.spec)
    system, M = spec.system, spec.monoid
    S = [M.parse(t) for t in args.S]
    if any(s == M.identity for s in S):
        raise ValueError("the identity cannot appear in S")
    trunc = None
    if args.fock:
        trunc = fock.build_truncation(system, spec.L if args.L is None else args.L)
        assignment = fock_assignment(trunc, tol=spec.tol)
    else:
        assignment = load_assignment(system, args.assignment)
        assignment.tol = spec.tol
    print(f"criterion: {criterion_string(system)}")
    P = faithfulness_product(assignment, S)
    nonzero, witness = check_faithfulness_criterion(assignment, S)
    print(f"S = {{{', '.join(M.format(s) for s in S)}}}")
    print(f"norm of prod (I - alpha_s(I)): {np.linalg.norm(P, 2):.6g}")
    if nonzero:
        print(f"witness: {_format_witness(witness, trunc)}")
        print("criterion holds: product is nonzero")
        return EXIT_OK
    print("criterion fails: product vanishes")
    return EXIT_FAIL


def cmd_expect(args) -> int:
    spec = load_spec(args.spec)
    system = spec.system
    ms = parse_monomial_sum(system, args.expression)
    print(f"X            = {format_monomial_sum(ms)}")
    print(f"Phi_delta(X) = {format_monomial_sum(phi_delta(ms))}")
    if isinstance(system.monoid, FreeProduct):
        print(f"Phi_theta(X) = {format_monomial_sum(phi_theta(ms))}")
    trunc = fock.build_truncation(system, spec.L if args.L is None else args.L)
    report = check_expectation_diagram(trunc, ms, spec.tol)
    return _emit_report(report, args.json)


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prodsys", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("relations", help="emit multiplication and adjoint relation files")
    r.add_argument("spec")
    r.add_argument("--out", default=".", help="output directory (default: current)")
    r.add_argument("--letters", help="comma-separated generator letters, e.g. U,V")
    r.set_defaults(func=cmd_relations)

    f = sub.add_parser("fock", help="run the truncated Fock invariant suites")
    f.add_argument("spec")
    f.add_argument("--L", type=int, help="override the truncation bound")
    f.add_argument("--samples", type=int, default=20, help="random samples per suite")
    f.add_argument("--json", help="write the report as JSON here")
    f.add_argument("--export", help="directory for generator operators as triplet files")
    f.set_defaults(func=cmd_fock)

    j = sub.add_parser("join", help="joins, sigma and theta of elements")
    j.add_argument("spec")
    j.add_argument("elements", nargs="+", help="elements such as '(1,0)' or 'x2 y1'")
    j.set_defaults(func=cmd_join)

    o = sub.add_parser("oracle", help="brute-force cross-checks")
    o.add_argument("spec")
    o.add_argument("--pairs", type=int, default=1000)
    o.add_argument("--monomials", type=int, default=200)
    o.add_argument("--max-length", type=int, default=5)
    o.add_argument("--L", type=int)
    o.add_argument("--json")
    o.set_defaults(func=cmd_oracle)

    fa = sub.add_parser("faithful", help="evaluate the faithfulness product on a set S")
    fa.add_argument("spec")
    src = fa.add_mutually_exclusive_group(required=True)
    src.add_argument("--fock", action="store_true", help="use the truncated left regular representation")
    src.add_argument("--assignment", help=".npz file with arrays g{g}_{i} and optional interior")
    fa.add_argument("--L", type=int)
    fa.add_argument("S", nargs="+", help="nonidentity elements")
    fa.set_defaults(func=cmd_faithful)

    e = sub.add_parser("expect", help="apply the diagonal expectations to a monomial expression")
    e.add_argument("spec")
    e.add_argument("expression", help="e.g. \"2 * E[(1,0):0] * B[(0,1)] * E[(1,0):1]'\"")
    e.add_argument("--L", type=int)
    e.add_argument("--json")
    e.set_defaults(func=cmd_expect)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, ValueError, OverflowError, OSError) as exc:
        print(f"prodsys {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
