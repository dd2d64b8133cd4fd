"""
Approximation by integer polynomials
====================================

A continuous f on K (cap K < 1) is a uniform limit of integer polynomials
exactly when it agrees with some integer polynomial on the kernel J(K).
"""

from fractions import Fraction

from zcap import CompactSet, RealPoly, sup_norm
from zcap.approximate import TargetFunction, approximate
from zcap.errors import NotInterpolable

# The kernel of [1/4, 1/2] is empty, so every target is approximable.
K = CompactSet.interval(Fraction(1, 4), Fraction(1, 2))
f = TargetFunction.constant(Fraction(1, 2))
print("2T - 2T^2 is within", sup_norm(RealPoly([-0.5, 2, -2]), K).value, "of 1/2 on", K)
for eps in (0.2, 0.05, 0.02):
    res = approximate(f, K, eps)
    print(f"eps={eps}: degree {res.poly.degree}, certified error {res.achieved_error:.4f}, "
          f"bivariate degree {res.bivariate_degree}, k {res.k_used}")

# On [-1, 1] the kernel is {-1, 0, 1}.  A constant 1/2 cannot be matched
# at 0 by an integer polynomial.
try:
    approximate(f, CompactSet.interval(-1, 1), 0.2)
except NotInterpolable as exc:
    print("\n[-1,1], f = 1/2:", exc)

# (T + T^3) / 2 takes integer values at -1, 0, 1, so it is approximable.
g = TargetFunction.from_poly(RealPoly([0, Fraction(1, 2), 0, Fraction(1, 2)]))
res = approximate(g, CompactSet.interval(-1, 1), 0.3)
print("(T + T^3)/2 on [-1,1]: error", round(res.achieved_error, 4), "degree", res.poly.degree)

# Sampled targets are interpolated piecewise linearly.
h = TargetFunction.from_samples([0.25, 0.3, 0.4, 0.5], [0.5, 0.6, 0.4, 0.45])
print("sample table: error", round(approximate(h, K, 0.2).achieved_error, 4))
