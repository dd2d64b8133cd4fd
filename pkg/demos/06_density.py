"""
Prescribing values at algebraic integers
========================================

If x is an algebraic integer with at least one conjugate left free, the
values Q(x) for Q in Z[T] are dense in R.  Here x is the golden ratio.
"""

from zcap import IntPoly
from zcap.approximate import certify_dense, dense_interpolate
from zcap.kernel import class_from_poly

phi = class_from_poly(IntPoly([-1, -1, 1]))
top = phi.roots.index(max(phi.roots))
for y, eps in ((0.5, 0.3), (-1.3, 0.25), (2.7, 0.25), (0.1, 1e-4)):
    Q = dense_interpolate([(phi, {top: y})], eps)
    err = certify_dense(Q, [(phi, {top: y})], eps)
    print(f"y={y:5}: degree {Q.degree:3d}, |Q(phi) - y| = {err:.3g} < {eps}")

# Both conjugates fixed: Q(phi) + Q(phi') is an integer, so this is refused.
try:
    dense_interpolate([(phi, [0.1, 0.2])], 0.1)
except Exception as exc:
    print(type(exc).__name__, exc)
