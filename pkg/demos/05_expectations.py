"""Monomial sums, their products and the diagonal expectations."""

import numpy as np

from prodsys import FreeProduct, ProductSystem, build_truncation
from prodsys.crossed_product import (
    check_expectation_diagram,
    format_monomial_sum,
    monomial_product,
    parse_monomial_sum,
    phi_delta,
    phi_theta,
    random_monomial_sum,
)

E = ProductSystem(FreeProduct(2), (2, 2))
X = parse_monomial_sum(E, "2 * E[x1:0] * B[y1] * E[x1:1]' + E[x1 y1:0] * E[y1 x1:1]' + E[x1:0] * E[y1:1]' + E[e:0] * E[e:0]'")
# the last-but-one term has unequal abelian degrees, so Phi_theta removes it
print("X               =", format_monomial_sum(X))
print("Phi_theta(X)    =", format_monomial_sum(phi_theta(X)))
print("Phi_delta(X)    =", format_monomial_sum(phi_delta(X)))
print("X* X has", len(monomial_product(X.adjoint(), X)), "terms")

trunc = build_truncation(E, 2)
rng = np.random.default_rng(3)
Y = random_monomial_sum(E, rng, n_terms=6)
print(check_expectation_diagram(trunc, Y).table())
