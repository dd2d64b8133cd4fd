"""Monic minimax (Chebyshev) polynomials of a compact set.

Single intervals have a closed form obtained from the classical Chebyshev
polynomial by an affine change of variable.  For unions of intervals the
minimiser is computed by an exchange method: a linear program over a finite
reference set gives a lower bound on the optimum, the sup-norm of the
candidate over K gives an upper bound, and the worst points of K are added
to the reference until the two meet.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.optimize import linprog

from .config import DEFAULT, Config
from .core import CompactSet, RealPoly, as_fraction, sup_norm
from .errors import DegenerateInterval, NoConvergence

__all__ = ["ChebyshevResult", "chebyshev", "chebyshev_closed_form", "classical_chebyshev"]


@dataclass(frozen=True)
class ChebyshevResult:
    poly: RealPoly
    norm: float
    alternation_points: tuple
    method: str
    gap: float = 0.0
    iterations: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "coefficients": [float(c) for c in self.poly.coeffs],
            "norm": self.norm,
            "alternation_points": list(self.alternation_points),
            "method": self.method,
            "gap": self.gap,
        }


def classical_chebyshev(n: int) -> list[int]:
    """Integer coefficients (ascending) of T_n, T_n(cos t) = cos(n t)."""
    prev, cur = [1], [0, 1]
    if n == 0:
        return prev
    for _ in range(n - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


def chebyshev_closed_form(a, b, n: int) -> ChebyshevResult:
    """T_n([a, b]) = 2 ((b - a)/4)^n T_n((2T - a - b)/(b - a)).

    The coefficients are computed in exact rational arithmetic; the returned
    polynomial stays exact when both endpoints are ints or Fractions.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    fa, fb = as_fraction(a), as_fraction(b)
    if fa >= fb:
        raise DegenerateInterval(f"need a < b, got [{a}, {b}]")
    exact = all(isinstance(e, (int, Fraction)) for e in (a, b))
    width = fb - fa
    inner = RealPoly([-(fa + fb) / width, Fraction(2) / width])
    scale = 2 * (width / 4) ** n
    poly = RealPoly(classical_chebyshev(n)).compose(inner) * scale
    if not exact:
        poly = poly.to_real()
    norm = float(scale)
    mid, half = (float(fa) + float(fb)) / 2, float(width) / 2
    nodes = tuple(sorted(mid + half * np.cos(np.pi * np.arange(n + 1) / n)))
    return ChebyshevResult(poly, norm, nodes, "closed_form")


def _reference_init(Kt, n_points):
    lengths = np.array([b - a for a, b in Kt])
    share = lengths / lengths.sum()
    counts = np.maximum(1, np.round(share * n_points)).astype(int)
    pts = []
    for (a, b), m in zip(Kt, counts):
        if a == b or m == 1:
            pts.append(np.array([(a + b) / 2, a, b][: max(1, min(m + 1, 3))]))
            continue
        t = np.cos(np.pi * np.arange(m) / (m - 1))
        pts.append((a + b) / 2 + (b - a) / 2 * t)
    return np.unique(np.concatenate(pts))


def _error_series(bcoef, n):
    c = np.zeros(n + 1)
    c[:n] = -bcoef
    c[n] = 1.0
    return c


def _extrema(c, Kt):
    """Endpoints and interior critical points of the Chebyshev series on Kt."""
    dc = C.chebder(c)
    roots = C.chebroots(dc) if len(dc) > 1 else np.empty(0)
    real = roots[np.abs(roots.imag) <= 1e-9].real if roots.size else np.empty(0)
    pts = [np.array([a, b]) for a, b in Kt]
    for a, b in Kt:
        pts.append(real[(real > a) & (real < b)])
    x = np.unique(np.concatenate(pts))
    return x, C.chebval(x, c)


def _solve_lp(ref, n):
    V = C.chebvander(ref, n)
    A_basis, target = V[:, :n], V[:, n]
    m = len(ref)
    # variables (b_0..b_{n-1}, h); constraints +-(target - A b) <= h
    A_ub = np.vstack([np.hstack([-A_basis, -np.ones((m, 1))]),
                      np.hstack([A_basis, -np.ones((m, 1))])])
    b_ub = np.concatenate([-target, target])
    cost = np.zeros(n + 1)
    cost[-1] = 1.0
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * (n + 1), method="highs",
                  options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10})
    if res.status != 0:
        raise NoConvergence(f"reference LP failed: {res.message}")
    bcoef, h = res.x[:n], res.x[n]
    # polish on the active set given by the dual multipliers (a Remez step)
    duals = np.abs(res.ineqlin.marginals)
    rows = np.flatnonzero(duals > 1e-12 * max(duals.max(), 1e-300))
    if len(rows) == n + 1:
        idx = rows % m
        sig = np.where(rows < m, 1.0, -1.0)
        M = np.hstack([A_basis[idx], sig[:, None]])
        try:
            sol = np.linalg.solve(M, target[idx])
        except np.linalg.LinAlgError:
            sol = None
        if sol is not None:
            b2, h2 = sol[:n], sol[n]
            e2 = target - A_basis @ b2
            if h2 > 0 and np.max(np.abs(e2)) <= h2 * (1 + 1e-9):
                bcoef, h = b2, h2
    return bcoef, float(h)


def _exchange(K: CompactSet, n: int, cfg: Config):
    lo, hi = K.lo, K.hi
    mid, s = (lo + hi) / 2, (hi - lo) / 2
    Kt = [((a - mid) / s, (b - mid) / s) for a, b in K.float_intervals]
    Kt[0] = (-1.0, Kt[0][1])
    Kt[-1] = (Kt[-1][0], 1.0)
    ref = _reference_init(Kt, 2 * (n + 1))
    h_lo, h_hi, c = 0.0, np.inf, None
    for it in range(1, cfg.max_iters + 1):
        bcoef, h_lo = _solve_lp(ref, n)
        c = _error_series(bcoef, n)
        x, vals = _extrema(c, Kt)
        av = np.abs(vals)
        h_hi = float(av.max())
        if h_hi - h_lo <= cfg.exchange_tol * h_hi:
            break
        worst = x[av > h_lo * (1 + 1e-14)]
        ref = np.unique(np.concatenate([ref, worst]))
    else:
        raise NoConvergence(f"exchange gap {(h_hi - h_lo) / h_hi:.3e} after {cfg.max_iters} iterations")
    factor = s ** n * 2.0 ** (1 - n)
    # t-series -> x power series
    power_t = C.cheb2poly(c)
    poly = RealPoly([0.0])
    inner = RealPoly([-mid / s, 1.0 / s])
    for coef in reversed(power_t):
        poly = poly * inner + RealPoly([float(coef)])
    coeffs = [float(v) * factor for v in poly.coeffs]
    coeffs[n] = 1.0
    x, vals = _extrema(c, Kt)
    av = np.abs(vals)
    alt = tuple(float(mid + s * t) for t in x[av >= h_hi * (1 - 1e-6)])
    rel_gap = (h_hi - h_lo) / h_hi
    return RealPoly(coeffs), alt, rel_gap, it, factor * h_hi


def chebyshev(K: CompactSet, n: int, cfg: Config = DEFAULT, method: str = "auto") -> ChebyshevResult:
    """Monic degree-``n`` polynomial of least sup-norm on K.

    ``method='auto'`` uses the closed form on a single interval and the
    exchange otherwise; ``'exchange'`` forces the iterative solver.  The
    reported ``gap`` is the relative difference between the continuous upper
    bound and the discrete lower bound at termination.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    if method not in ("auto", "exchange", "closed_form"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed_form" or (method == "auto" and K.is_interval):
        if not K.is_interval:
            raise ValueError("closed form needs a single interval")
        (a, b), = K.intervals
        return chebyshev_closed_form(a, b, n)
    poly, alt, gap, iters, norm_t = _exchange(K, n, cfg)
    norm = sup_norm(poly, K, cfg).value
    return ChebyshevResult(poly, norm, alt, "exchange", gap, iters, {"norm_cheb_basis": norm_t})
