"""Joins, least upper bounds and abelianisation in N^2 and N*N."""

from prodsys import INFINITY, FreeAbelian, FreeProduct

N2 = FreeAbelian(2)
a, b = N2.parse("(2,0)"), N2.parse("(1,3)")
print("N^2:", N2.format(a), "v", N2.format(b), "=", N2.format_join(N2.join(a, b)))
print("     (1,0) <= (2,1):", N2.leq((1, 0), (2, 1)))

FP = FreeProduct(2)
x, xy, yx = FP.parse("x1"), FP.parse("x1 y1"), FP.parse("y1 x1")
# prefix order: comparable words join to the longer one, others have no upper bound
print("N*N: x v xy =", FP.format_join(FP.join(x, xy)))
print("     xy v yx =", FP.format_join(FP.join(xy, yx)))
print("     sigma{e, x, xy} =", FP.format_join(FP.sigma([FP.identity, x, xy])))
print("     theta(x2 y1 x1) =", FP.theta(FP.parse("x2 y1 x1")))
assert FP.join(xy, yx) is INFINITY

print("words of length <= 2:", [FP.format(w) for w in FP.elements_up_to(2)])
