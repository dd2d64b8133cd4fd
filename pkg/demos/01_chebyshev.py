"""
Chebyshev polynomials of a compact set
======================================

The monic polynomial of degree n with the least sup-norm on K.  On an
interval it has a closed form; on a union of intervals it is found by an
exchange on a reference set, certified by a discrete lower bound.
"""

from fractions import Fraction

from zcap import parse_set
from zcap.chebyshev import chebyshev, chebyshev_closed_form

# On [-1, 1] the answer is 2^(1-n) T_n.  The coefficients stay exact.
for n in range(1, 6):
    res = chebyshev_closed_form(-1, 1, n)
    print(n, res.poly, "norm", res.norm)

# Any interval is an affine image of [-1, 1].
res = chebyshev_closed_form(Fraction(-1, 2), Fraction(1, 2), 2)
print("\n[-1/2,1/2], n = 2:", res.poly, "norm", res.norm)

# A symmetric pair of intervals.  By symmetry the linear term vanishes and
# T^2 ranges over [1/4, 1], so the best constant is 5/8.
K = parse_set("[-1,-1/2] U [1/2,1]")
res = chebyshev(K, 2)
print(f"\n{K}", res.method, [round(float(c), 12) for c in res.poly.coeffs], "norm", res.norm)

# Equioscillation need not hold on a union; the certificate is the gap.
for n in (3, 4, 5):
    res = chebyshev(K, n)
    print(f"n={n}: norm {res.norm:.6g}, relative gap {res.gap:.1e}, "
          f"{len(res.alternation_points)} extremal points")
