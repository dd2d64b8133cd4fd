"""
The Fekete kernel
=================

J(K) is the set of common zeros in K of all integer polynomials with
norm < 1 on K.  Each of its points is a totally real algebraic integer
whose conjugates all lie in K, so it is found by enumerating monic integer
polynomials with every root in K (Sturm counts, exactly) and keeping the
irreducible ones.
"""

from fractions import Fraction

from zcap import CompactSet, IntPoly
from zcap.kernel import enumerate_kernel, symmetric_interval_candidates, symmetric_k_bound, verify_kernel_point

K = CompactSet.interval(-1, 1)
r = enumerate_kernel(K, 4)
print("J([-1,1]) =", r.points, "complete:", r.complete, "witness:", r.witness)
print("verified with 25 small-norm polynomials:", all(verify_kernel_point(c, K, 25) for c in r.classes))

print("J([1/4,1/2]) =", enumerate_kernel(CompactSet.interval(Fraction(1, 4), Fraction(1, 2)), 6).points)

# On [-a, a] with a < 2 the kernel points are among the 2 cos(2 pi j / k)
# with k bounded by 2 pi / arccos(a / 2).
for a in (1, 1.5, 1.9):
    classes = symmetric_interval_candidates(a)
    print(f"a={a}: k <= {symmetric_k_bound(a)}, classes",
          [str(c.min_poly) for c in classes])

r = enumerate_kernel(CompactSet.interval(-1.5, 1.5), 6)
print("\nJ([-1.5,1.5]) classes:", [str(c.min_poly) for c in r.classes])
print("sqrt 2 is there:", IntPoly([-2, 0, 1]) in {c.min_poly for c in r.classes})
