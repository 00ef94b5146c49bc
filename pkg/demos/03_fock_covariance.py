"""The truncated left regular representation and its covariance."""

import numpy as np

from prodsys import FreeProduct, ProductSystem, build_truncation
from prodsys import fock, suites

E = ProductSystem(FreeProduct(2), (2, 2))
trunc = build_truncation(E, 2)
M = trunc.monoid
print(f"{len(trunc.members)} fibres, total dimension {trunc.vacuum().shape[0]}")

x, y = M.parse("x1"), M.parse("y1")
# x and y have no common upper bound, so the range projections are orthogonal
P = fock.alpha_I(trunc, x) @ fock.alpha_I(trunc, y)
print("||alpha_I(x) alpha_I(y)|| =", np.abs(P.dense()).max())

for rep in (suites.covariance_suite(trunc), suites.isometry_suite(trunc)):
    print(rep.table())

F = [x, M.parse("x1 y1")]
for A in ([], [x], F, [M.parse("x1 y1")]):
    Q = fock.q_a(trunc, F, A)
    print(f"A = {[M.format(a) for a in A]}: initial segment {fock.is_initial_segment(M, F, A)}, rank {int(round(np.trace(Q.dense()).real))}")
