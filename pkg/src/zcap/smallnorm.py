"""Integer polynomials of sup-norm < 1 on sets of capacity < 1.

``construct_small_norm`` turns a real monic polynomial ``Q`` with
``|Q|_K < 1`` into a monic integer polynomial of small norm: each power
``Q^k`` is rewritten in the mixed base ``T^i Q^l`` so that all coefficients
of degree >= m become integers, leaving a fractional remainder ``P_k`` of
degree < m.  Two powers whose remainders (nearly) coincide give the answer
``Z_k' - Z_k``.  ``exhaustive_small_norm`` is an independent brute-force
search used to cross-check it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np
from scipy.optimize import linprog

from .capacity import is_subunit_capacity
from .chebyshev import chebyshev
from .config import DEFAULT, Config
from .core import CompactSet, IntPoly, RealPoly, as_fraction, sup_norm
from .errors import BudgetExceeded, CapacityAtLeastOne

__all__ = [
    "SmallNormTrace",
    "construct_small_norm",
    "exhaustive_small_norm",
    "enumerate_small_norm",
    "small_norm_pool",
    "rational_seed",
]


@dataclass(frozen=True)
class SmallNormTrace:
    q: RealPoly
    delta: float
    alpha: float
    d: int
    C: float
    ell0: int
    m: int
    eps: float
    k_pair: tuple
    fractional_polys: tuple
    result: IntPoly
    norm: float
    collision: str
    candidates: int
    shift: IntPoly = field(default_factory=lambda: IntPoly([]))
    expansion_log: dict = field(default_factory=dict, compare=False)

    def check(self) -> list[str]:
        """Names of violated invariants (empty when all hold)."""
        bad = []
        if not self.alpha < 1:
            bad.append("alpha < 1")
        if not self.C >= 1:
            bad.append("C >= 1")
        if not self.alpha ** self.ell0 * self.C / (1 - self.alpha) < self.delta:
            bad.append("alpha^ell0 C / (1 - alpha) < delta")
        if not math.isclose(self.eps, float(Fraction(self.delta) / Fraction(self.C) ** (self.m + 1)),
                            rel_tol=1e-12):
            bad.append("eps = delta / C^(m+1)")
        if not self.result.is_monic():
            bad.append("result monic")
        if not self.norm < 6 * self.delta:
            bad.append("norm < 6 delta")
        for P in self.fractional_polys:
            if any(not 0 <= c < 1 for c in P.coeffs) or P.degree >= self.m:
                bad.append("fractional poly in [0,1), degree < m")
        return bad

    def to_dict(self, full: bool = False) -> dict:
        out = {
            "coefficients": self.result.to_json(),
            "norm": self.norm,
            "method": "pigeonhole",
            "k_pair": list(self.k_pair),
            "collision": self.collision,
        }
        if full:
            out["trace"] = {
                "q": [float(c) for c in self.q.coeffs],
                "delta": self.delta,
                "alpha": self.alpha,
                "d": self.d,
                "C": self.C,
                "ell0": self.ell0,
                "m": self.m,
                "eps": self.eps,
                "candidates": self.candidates,
                "fractional_polys": [[float(c) for c in P.coeffs] for P in self.fractional_polys],
                "shift": self.shift.to_json(),
                "expansion_log": {str(k): v for k, v in self.expansion_log.items()},
            }
        return out


# ---------------------------------------------------------------------------
# mixed-base expansion
# ---------------------------------------------------------------------------


def rational_seed(K: CompactSet, cfg: Config = DEFAULT, max_den: int = 1 << 12):
    """``(Q, alpha)``: a monic rational Q with alpha = |Q|_K < 1 (upper bound), the first Chebyshev polynomial of K
    with norm < 1, kept exact for rational intervals and otherwise rounded to
    coefficients with denominator <= ``max_den`` (norm re-checked)."""
    for n in range(1, cfg.n_cap + 1):
        ch = chebyshev(K, n, cfg)
        if ch.norm >= 1:
            continue
        if isinstance(ch.poly, RealPoly) and ch.poly.is_exact:
            q = ch.poly
        else:
            q = RealPoly([as_fraction(c).limit_denominator(max_den) for c in ch.poly.coeffs[:-1]] + [1])
        alpha = sup_norm(q, K, cfg).certified_upper
        if alpha < 1:
            return q, alpha
    raise CapacityAtLeastOne(f"no monic polynomial of norm < 1 up to degree {cfg.n_cap}")


class _Expander:
    """Reduce Q^k so that every coefficient of degree >= m is an integer."""

    def __init__(self, q: RealPoly, ell0: int):
        self.q = [as_fraction(c) for c in q.coeffs]
        self.d = len(self.q) - 1
        self.ell0 = ell0
        self.m = ell0 * self.d
        self.powers = [[Fraction(1)]]

    def power(self, ell):
        while len(self.powers) <= ell:
            a, out = self.powers[-1], [Fraction(0)] * (len(self.powers[-1]) + self.d)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(self.q):
                        if y:
                            out[i + j] += x * y
            self.powers.append(out)
        return self.powers[ell]

    def expand(self, k):
        """Return (Z_k, P_k, b) with Q^k - sum b_{i,l} T^i Q^l = Z_k + P_k."""
        R = list(self.power(k))
        b = {}
        d, m = self.d, self.m
        for D in range(len(R) - 1, m - 1, -1):
            c = R[D]
            frac = c - math.floor(c)
            if frac:
                ell, i = divmod(D, d)
                b[(i, ell)] = frac
                for t, x in enumerate(self.power(ell)):
                    if x:
                        R[t + i] -= frac * x
        Z = [math.floor(c) for c in R]
        P = [R[t] - Z[t] for t in range(m)]
        return IntPoly(Z), P, b


def construct_small_norm(K: CompactSet, delta: float | None = None, cfg: Config = DEFAULT,
                         max_k: int | None = None) -> SmallNormTrace:
    """Monic integer polynomial with sup-norm < 6 delta on K (pigeonhole).

    The seed Q is the lowest-degree Chebyshev polynomial of K with norm < 1.
    Remainders ``P_k`` are bucketed on the eps-grid of [0,1)^m; in addition
    each new remainder is compared against the previous ones modulo integers
    in the K-sup-norm, which catches collisions the worst-case eps-grid is
    far too fine to see.  Any accepted pair is certified by the sup-norm of
    the integer result.
    """
    delta = cfg.delta if delta is None else delta
    if not 0 < delta < 1 / 6:
        raise ValueError("delta must lie in (0, 1/6)")
    if not is_subunit_capacity(K, cfg):
        raise CapacityAtLeastOne(f"{K} has capacity >= 1 (no monic norm < 1 found)")
    q, alpha = rational_seed(K, cfg)
    d = q.degree
    radius = K.radius
    C = float(sum(radius ** i for i in range(d)))
    ell0 = 1
    while alpha ** ell0 * C / (1 - alpha) >= delta:
        ell0 += 1
    m = ell0 * d
    if m > cfg.max_base_degree:
        raise BudgetExceeded(f"base degree m = {m} exceeds max_base_degree = {cfg.max_base_degree}")
    # exact: C^(m+1) overflows floats long before m gets large
    eps_fr = Fraction(delta) / Fraction(C) ** (m + 1)
    eps = float(eps_fr)
    max_k = cfg.max_k if max_k is None else max_k

    exp = _Expander(q, ell0)
    grid = K.grid(256, kind="cheb")
    V = np.vander(grid, m, increasing=True) if m else np.zeros((len(grid), 0))
    buckets: dict = {}
    store_P, store_Z, store_b, ks = [], [], [], []
    screen = np.empty((0, m))
    last_err = None
    for count, k in enumerate(range(max(m, 1), max(m, 1) + max_k), 1):
        Z, P, b = exp.expand(k)
        Pf = np.array([float(x) for x in P])
        key = tuple(math.floor(x / eps_fr) for x in P)
        partners = []
        if key in buckets:
            partners.append((buckets[key], "epsilon_grid", None))
        if len(ks):
            diff = Pf[None, :] - screen
            shift = np.round(diff)
            r = (diff - shift) @ V.T if m else np.zeros((len(ks), len(grid)))
            vals = np.abs(r).max(axis=1) if m else np.zeros(len(ks))
            for j in np.argsort(vals)[:3]:
                if vals[j] < delta:
                    partners.append((int(j), "torus_sup_norm", shift[j]))
        for j, kind, shift_vec in partners:
            N = IntPoly([int(v) for v in shift_vec]) if shift_vec is not None else IntPoly([])
            cand = Z - store_Z[j] + N
            if not cand.is_monic():
                continue
            sn = sup_norm(cand, K, cfg)
            if sn.certified_upper < 6 * delta:
                frac_polys = (RealPoly(list(store_P[j])), RealPoly(list(P)))
                log = {ks[j]: _b_summary(store_b[j]), k: _b_summary(b)}
                return SmallNormTrace(q, delta, float(alpha), d, C, ell0, m, eps, (ks[j], k),
                                      frac_polys, cand, sn.value, kind, count, N, log)
            last_err = sn.value
        buckets.setdefault(key, len(ks))
        ks.append(k)
        store_P.append(P)
        store_Z.append(Z)
        store_b.append(b)
        screen = np.vstack([screen, Pf[None, :]])[-cfg.max_pairs_window:]
        if len(ks) > cfg.max_pairs_window:
            # keep indices aligned with the screening window
            drop = len(ks) - cfg.max_pairs_window
            ks, store_P, store_Z, store_b = ks[drop:], store_P[drop:], store_Z[drop:], store_b[drop:]
            buckets = {kk: v - drop for kk, v in buckets.items() if v >= drop}
    raise BudgetExceeded(f"no usable collision among {max_k} powers (last candidate norm {last_err})")


def _b_summary(b: dict) -> dict:
    return {f"{i},{ell}": float(v) for (i, ell), v in sorted(b.items())}


# ---------------------------------------------------------------------------
# brute-force search
# ---------------------------------------------------------------------------


def _lp_bound(A, rhs_lo, rhs_hi, box, idx, sense):
    n = A.shape[1]
    cost = np.zeros(n)
    cost[idx] = sense
    res = linprog(cost, A_ub=np.vstack([A, -A]), b_ub=np.concatenate([rhs_hi, -rhs_lo]),
                  bounds=box, method="highs")
    if res.status == 2:
        return None
    if res.status != 0:
        return box[idx][0] if sense > 0 else box[idx][1]
    return res.fun * sense


def enumerate_small_norm(K: CompactSet, degree: int, coeff_bound: int, monic: bool = True,
                         cfg: Config = DEFAULT):
    """All integer polynomials of exactly this degree (monic, or with positive
    leading coefficient) with coefficients in [-B, B] and sup-norm < 1 on K.

    Integer points of the polytope {c : |p_c(x_j)| <= 1 on a grid of K} are
    enumerated coordinate by coordinate with LP bounds; survivors are
    certified with ``sup_norm``.
    """
    grid = np.unique(np.concatenate([K.grid(max(64, 16 * degree), kind="cheb"),
                                     np.array(K.float_intervals).ravel()]))
    A = np.vander(grid, degree + 1, increasing=True)
    B = coeff_bound
    lead_range = [1] if monic else range(1, B + 1)
    slack = 1e-9
    found = []
    for lead in lead_range:
        base = lead * A[:, degree]
        Af = A[:, :degree]

        def rec(fixed):
            i = len(fixed)
            if i == degree:
                p = IntPoly(list(fixed) + [lead])
                if sup_norm(p, K, cfg).value < 1:
                    found.append(p)
                return
            shift = base + (Af[:, :i] @ np.array(fixed, float) if i else 0.0)
            sub = Af[:, i:]
            box = [(-B, B)] * (degree - i)
            lo = _lp_bound(sub, -1 - slack - shift, 1 + slack - shift, box, 0, 1.0)
            if lo is None:
                return
            hi = _lp_bound(sub, -1 - slack - shift, 1 + slack - shift, box, 0, -1.0)
            if hi is None:
                return
            for c in range(max(-B, math.ceil(lo - 1e-7)), min(B, math.floor(hi + 1e-7)) + 1):
                rec(fixed + [c])

        rec([])
    return found


def exhaustive_small_norm(K: CompactSet, max_deg: int | None = None, coeff_bound: int | None = None,
                          cfg: Config = DEFAULT):
    """Lowest-degree monic integer polynomial with |coeffs| <= coeff_bound and
    sup-norm < 1 on K, or ``None`` when the box contains none.

    Among candidates of the lowest degree the smallest norm wins, then the
    lexicographically smallest coefficient tuple (ascending order).
    """
    max_deg = cfg.oracle_max_deg if max_deg is None else max_deg
    coeff_bound = cfg.oracle_coeff_bound if coeff_bound is None else coeff_bound
    if max_deg < 1:
        raise ValueError("max_deg must be >= 1")
    if K.measure / 4 >= 1:
        return None
    for d in range(1, max_deg + 1):
        found = enumerate_small_norm(K, d, coeff_bound, True, cfg)
        if found:
            scored = sorted(found, key=lambda p: (sup_norm(p, K, cfg).value, p.coeffs))
            return scored[0]
    return None


def small_norm_pool(K: CompactSet, size: int | None = None, max_deg: int | None = None,
                    coeff_bound: int | None = None, cfg: Config = DEFAULT, include_construct: bool = True):
    """Distinct elements of B(K) = {P in Z[T] : |P|_K < 1}.

    Seeds come from the brute-force box search (monic and non-monic) and the
    pigeonhole construction; the pool is filled up with products and powers
    of seeds, which stay in B(K) because norms are submultiplicative.
    """
    size = cfg.pool_size if size is None else size
    max_deg = min(cfg.oracle_max_deg, 6) if max_deg is None else max_deg
    coeff_bound = min(cfg.oracle_coeff_bound, 3) if coeff_bound is None else coeff_bound
    seeds: list[IntPoly] = []
    if K.measure / 4 < 1:
        for d in range(1, max_deg + 1):
            seeds.extend(enumerate_small_norm(K, d, coeff_bound, False, cfg))
            if len(seeds) >= size:
                break
        if include_construct and not seeds:
            try:
                seeds.append(construct_small_norm(K, cfg=cfg, max_k=400).result)
            except (BudgetExceeded, CapacityAtLeastOne):
                pass
    seen = set()
    pool = []
    for s in seeds:
        if s.coeffs not in seen:
            seen.add(s.coeffs)
            pool.append(s)
    if not pool:
        return pool
    base = list(pool)
    for r in range(2, 4):
        for combo in combinations_with_replacement(range(len(base)), r):
            if len(pool) >= size:
                return pool[:size]
            p = IntPoly([1])
            for i in combo:
                p = p * base[i]
            if p.coeffs not in seen:
                seen.add(p.coeffs)
                pool.append(p)
    return pool[:size]
