"""
Integer polynomials of small norm
=================================

When cap(K) < 1 some monic integer polynomial has sup-norm < 1 on K.
The construction expands powers of a small rational polynomial Q in a
mixed base, keeps the fractional parts, and lets the pigeonhole principle
find two exponents whose fractional parts nearly agree.  Their difference
gives a monic integer polynomial of norm < 6 delta.
"""

from zcap import parse_set, sup_norm
from zcap.smallnorm import construct_small_norm, exhaustive_small_norm

for text, delta in (("[-1/2,1/2]", 0.15), ("[0,0.4]", 0.15), ("[-1.2,1.2]", 0.16)):
    K = parse_set(text)
    tr = construct_small_norm(K, delta)
    print(f"{text}: degree {tr.result.degree}, norm {tr.norm:.3g} < {6 * delta:.2f}, "
          f"pair {tr.k_pair} via {tr.collision}, invariants violated: {tr.check()}")
    # a brute-force search over a small box usually does far better
    P = exhaustive_small_norm(K, 4, 3)
    print("    box search:", P, "norm", round(sup_norm(P, K).value, 6))

# Capacity 1: the integer polynomials are a discrete set and nothing works.
K = parse_set("[-2,2]")
print("\n[-2,2] box search:", exhaustive_small_norm(K, 6, 3))
try:
    construct_small_norm(K, 0.15)
except Exception as exc:
    print("construction refused:", type(exc).__name__)
