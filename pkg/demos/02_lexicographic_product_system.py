"""Fibres, lexicographic bases and a twisted multiplication over N^2."""

import numpy as np

from prodsys import Bicharacter, FreeAbelian, ProductSystem, inner_product

N2 = FreeAbelian(2)
E = ProductSystem(N2, (2, 3))
g, h = N2.generator(0), N2.generator(1)
print("dim E_(2,1) =", E.fibre_dim((2, 1)))

# e_1 at g times f_2 at h lands on basis index 1*3 + 2
w = E.multiply(E.basis_vector(g, 1), E.basis_vector(h, 2))
print("e_1 f_2 ->", w.base, int(np.flatnonzero(w.coeffs)[0]))

rng = np.random.default_rng(0)
u, v = E.random_vector(g, rng), E.random_vector(h, rng)
uv = E.multiply(u, v)
print("|<uv,uv> - <u,u><v,v>| =", abs(inner_product(uv, uv) - inner_product(u, u) * inner_product(v, v)))

mu = Bicharacter([[0.0, 0.7], [0.0, 0.0]]).bind(N2)
T = ProductSystem(N2, (2, 3), twist=mu)  # the twist is validated as a 2-cocycle here
print("twisted/untwisted phase on g*h:", np.round(T.multiply(u, v).coeffs[0] / uv.coeffs[0], 6))
print("twisted/untwisted phase on h*g:", np.round(T.multiply(v, u).coeffs[0] / E.multiply(v, u).coeffs[0], 6))
