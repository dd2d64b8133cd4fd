"""
Capacity from two directions
============================

|T_n(K)|^(1/n) and the Fekete products delta_n both decrease to cap(K).
On an interval cap = length / 4, and the Chebyshev route is off by
exactly the factor 2^(1/n).
"""

import math

from zcap import CompactSet, parse_set
from zcap.capacity import FeketeConfig, capacity, fekete_points

K = CompactSet.interval(-1, 1)
est = capacity(K, 16, 10)
for row in est.rows():
    d2 = "" if row["d2"] is None else f"{row['d2']:.6f}"
    print(f"n={row['n']:2d}  d1={row['d1']:.6f}  d1/2^(1/n)={row['d1'] / 2 ** (1 / row['n']):.6f}  d2={d2}")
print("bracket", est.bracket, "extrapolated", est.extrapolated)

# Three Fekete points on [-1, 1] are -1, 0, 1.
pts, d3 = fekete_points(K, FeketeConfig(3))
print("\nFekete points", [round(x, 9) for x in pts], "delta_3", d3, "2^(1/3)", 2 ** (1 / 3))

# Two symmetric intervals: cap([-1,-a] U [a,1]) = sqrt(1 - a^2) / 2.
U = parse_set("[-1,-1/2] U [1/2,1]")
est = capacity(U, 16, 8)
print("\nunion: best", est.best_estimate, "extrapolated", est.extrapolated, "exact", math.sqrt(0.75) / 2)
