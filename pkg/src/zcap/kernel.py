"""The Fekete kernel J(K): common zeros in K of every P in B(K).

J(K) is computed through its arithmetic description: the totally real
algebraic integers all of whose conjugates lie in K.  Monic integer
polynomials with every root in the hull of K are enumerated degree by
degree (coefficient ranges from interlacing of successive derivatives),
then real-rootedness and membership are certified with exact Sturm counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .capacity import is_subunit_capacity
from .config import DEFAULT, Config
from .core import CompactSet, IntPoly, as_fraction, poly_divmod, sup_norm
from .errors import CapacityAtLeastOne, HypothesisViolated, OutOfRange

__all__ = [
    "ConjugateClass",
    "KernelResult",
    "CandidatePoint",
    "sturm_chain",
    "count_roots",
    "is_irreducible",
    "class_from_poly",
    "symmetric_k_bound",
    "candidate_points",
    "symmetric_interval_candidates",
    "totally_real_candidates",
    "enumerate_kernel",
    "verify_kernel_point",
]


# ---------------------------------------------------------------------------
# exact real-root counting
# ---------------------------------------------------------------------------


def _rem(a, b):
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def sturm_chain(p: IntPoly) -> list:
    """Sturm sequence p, p', -rem(p_{i-1}, p_i), ... with Fraction coefficients."""
    if p.degree < 1:
        raise ValueError("Sturm chain needs degree >= 1")
    p0 = [Fraction(c) for c in p.coeffs]
    p1 = [Fraction(c) for c in p.derivative().coeffs]
    chain = [p0, p1]
    while True:
        r = _rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _horner(c, x):
    v = Fraction(0)
    for a in reversed(c):
        v = v * x + a
    return v


def _variations(signs):
    s = [v for v in signs if v != 0]
    return sum(1 for a, b in zip(s, s[1:]) if (a > 0) != (b > 0))


def _var_at(chain, x):
    if x == math.inf:
        return _variations([c[-1] for c in chain])
    if x == -math.inf:
        return _variations([c[-1] * (-1) ** (len(c) - 1) for c in chain])
    return _variations([_horner(c, x) for c in chain])


def count_roots(p: IntPoly, a=-math.inf, b=math.inf, chain=None) -> int:
    """Number of distinct real roots of p in the closed interval [a, b]."""
    chain = sturm_chain(p) if chain is None else chain
    fa = a if a in (math.inf, -math.inf) else as_fraction(a)
    fb = b if b in (math.inf, -math.inf) else as_fraction(b)
    n = _var_at(chain, fa) - _var_at(chain, fb)
    if fa not in (math.inf, -math.inf) and _horner(chain[0], fa) == 0:
        n += 1
    return n


def is_irreducible(p: IntPoly) -> bool:
    """Irreducibility over the rationals (sympy's factoriser)."""
    if p.degree < 1:
        return False
    if p.degree == 1:
        return True
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(p.coeffs)), x, domain="ZZ").is_irreducible


def _real_roots(p: IntPoly) -> list:
    c = np.array([float(v) for v in p.coeffs[::-1]])
    r = np.sort(np.roots(c).real) if p.degree > 1 else np.array([-p.coeffs[0] / p.coeffs[1]])
    dp = p.derivative()
    out = []
    for x in r:
        for _ in range(4):
            d = float(dp(x))
            if d == 0:
                break
            x = x - float(p(x)) / d
        out.append(float(x))
    return sorted(out)


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugateClass:
    min_poly: IntPoly
    roots: tuple
    degree: int

    def __post_init__(self):
        if not self.min_poly.is_monic():
            raise HypothesisViolated(f"minimal polynomial {self.min_poly} is not monic")
        if self.degree != self.min_poly.degree or len(self.roots) != self.degree:
            raise ValueError("degree / root count mismatch")
        if count_roots(self.min_poly) != self.degree:
            raise ValueError(f"{self.min_poly} is not totally real with simple roots")

    def in_set(self, K: CompactSet, tol: float) -> bool:
        chain = sturm_chain(self.min_poly)
        inside = sum(count_roots(self.min_poly, a - tol, b + tol, chain) for a, b in K.intervals)
        return inside == self.degree

    def to_dict(self) -> dict:
        return {"min_poly": self.min_poly.to_json(), "roots": list(self.roots), "degree": self.degree}


@dataclass(frozen=True)
class KernelResult:
    classes: tuple
    points: tuple
    search_degree_bound: int
    complete: bool
    witness: IntPoly | None = None

    def to_dict(self) -> dict:
        return {
            "classes": [c.to_dict() for c in self.classes],
            "points": list(self.points),
            "search_degree_bound": self.search_degree_bound,
            "complete": self.complete,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


@dataclass(frozen=True)
class CandidatePoint:
    j: int
    k: int
    value: float

    def __post_init__(self):
        if math.gcd(self.j, self.k) != 1:
            raise ValueError("j and k must be coprime")


def class_from_poly(p: IntPoly) -> ConjugateClass:
    return ConjugateClass(p, tuple(_real_roots(p)), p.degree)


# ---------------------------------------------------------------------------
# symmetric intervals: 2 cos(2 pi j / k)
# ---------------------------------------------------------------------------


def symmetric_k_bound(a: float) -> int:
    """floor(2 pi / arccos(a / 2)): largest k whose class can fit in [-a, a]."""
    if not 0 < a < 2:
        raise OutOfRange(f"need 0 < a < 2, got {a}")
    # guard: 2 pi / arccos(1/2) evaluates to 5.999... in floating point
    return math.floor(2 * math.pi / math.acos(a / 2) + 1e-9)


def candidate_points(a: float) -> list[CandidatePoint]:
    """All 2cos(2 pi j/k), gcd(j, k) = 1, 0 <= j <= k/2, k <= symmetric_k_bound(a)."""
    out = []
    for k in range(1, symmetric_k_bound(a) + 1):
        for j in range(0, k // 2 + 1):
            if math.gcd(j, k) == 1:
                out.append(CandidatePoint(j, k, 2 * math.cos(2 * math.pi * j / k)))
    return out


def symmetric_interval_candidates(a: float, cfg: Config = DEFAULT) -> list[ConjugateClass]:
    """Conjugate classes {2cos(2 pi j/k) : gcd(j, k) = 1} lying inside [-a, a].

    The minimal polynomial is the rounded expansion of prod (T - root); the
    rounding error must stay below ``cfg.rounding_tol``.
    """
    kmax = symmetric_k_bound(a)
    out = []
    for k in range(1, kmax + 1):
        vals = sorted({round(2 * math.cos(2 * math.pi * j / k), 14)
                       for j in range(0, k // 2 + 1) if math.gcd(j, k) == 1})
        roots = [2 * math.cos(2 * math.pi * j / k) for j in range(0, k // 2 + 1) if math.gcd(j, k) == 1]
        roots = sorted(roots)
        if len(vals) != len(roots):
            raise AssertionError("duplicate class values")
        if any(abs(r) > a + cfg.membership_tol for r in roots):
            continue
        coeffs = np.array([1.0])
        for r in roots:
            coeffs = np.convolve(coeffs, [-r, 1.0])
        ints = np.round(coeffs)
        err = float(np.max(np.abs(coeffs - ints)))
        if err >= cfg.rounding_tol:
            raise AssertionError(f"minimal polynomial rounding error {err} for k={k}")
        out.append(ConjugateClass(IntPoly([int(c) for c in ints]), tuple(roots), len(roots)))
    return out


# ---------------------------------------------------------------------------
# enumeration of totally real monic polynomials
# ---------------------------------------------------------------------------


def totally_real_candidates(lo: float, hi: float, d: int):
    """Monic integer polynomials of degree d that may have all roots in [lo, hi].

    Coefficients are fixed from the top down.  After fixing c_{d-1}..c_{r+1},
    q = p^(r) is known up to its constant term t = r! c_r; q' is known, so
    "all roots of q real and in [lo, hi]" becomes the linear conditions
    q(hi) >= 0, (-1)^deg q(lo) >= 0 and alternating signs of q at the roots
    of q'.  Float tolerance makes this a superset; callers certify exactly.
    """
    fact = [math.factorial(i) for i in range(d + 1)]
    M = max(abs(lo), abs(hi))

    def rec(c):  # c[i] known for i > r
        r = min(c) - 1 if c else d - 1
        deg_q = d - r
        # q_t = c_{t+r} (t+r)!/t!
        q = [0.0] * (deg_q + 1)
        for t in range(1, deg_q + 1):
            q[t] = c[t + r] * fact[t + r] / fact[t]
        qv = np.array(q)
        tmin, tmax = -math.inf, math.inf
        pts = [(hi, 1.0), (lo, (-1.0) ** deg_q)]
        if deg_q >= 2:
            dq = np.polynomial.polynomial.polyder(qv)
            crit = np.polynomial.polynomial.polyroots(dq)
            if np.any(np.abs(crit.imag) > 1e-6 * (1 + np.abs(crit.real))):
                return
            crit = np.sort(crit.real)[::-1]
            for i, s in enumerate(crit, 1):
                pts.append((float(s), (-1.0) ** i))
        for x, sgn in pts:
            base = float(np.polynomial.polynomial.polyval(x, qv))
            if sgn > 0:
                tmin = max(tmin, -base)
            else:
                tmax = min(tmax, -base)
        slack = 1e-7 * (1 + abs(tmin) + abs(tmax))
        cmin = math.ceil((tmin - slack) / fact[r])
        cmax = math.floor((tmax + slack) / fact[r])
        bound = math.comb(d, r) * M ** (d - r)
        cmin, cmax = max(cmin, -math.floor(bound + 1e-9)), min(cmax, math.floor(bound + 1e-9))
        for v in range(cmin, cmax + 1):
            c2 = dict(c)
            c2[r] = v
            if r == 0:
                yield IntPoly([c2[i] for i in range(d + 1)])
            else:
                yield from rec(c2)

    yield from rec({d: 1})


def _witness(K: CompactSet, cfg: Config):
    """Lowest-degree element of B(K) we can find (brute force, then pigeonhole)."""
    from .smallnorm import construct_small_norm, exhaustive_small_norm, enumerate_small_norm

    for d in range(1, cfg.max_deg + 1):
        found = enumerate_small_norm(K, d, cfg.oracle_coeff_bound, False, cfg)
        if found:
            # prefer no zeros in K (nothing to kill later), then the smallest norm
            def key(p):
                zeros = sum(count_roots(p, a, b) for a, b in K.intervals)
                return (zeros, sup_norm(p, K, cfg).value, p.coeffs)
            return min(found, key=key)
    try:
        return construct_small_norm(K, cfg=cfg, max_k=400).result
    except Exception:  # noqa: BLE001 - any failure just means no witness
        return exhaustive_small_norm(K, cfg.oracle_max_deg, cfg.oracle_coeff_bound, cfg)


def enumerate_kernel(K: CompactSet, max_deg: int | None = None, cfg: Config = DEFAULT) -> KernelResult:
    """Conjugate classes of J(K) of degree <= max_deg.

    ``complete`` is True when the search provably found all of J(K): either
    some P in B(K) of degree <= max_deg is known (every minimal polynomial of
    a kernel point divides P), or K = [-a, a] with a < 2 and every
    2cos(2 pi j/k) class inside K has degree <= max_deg.
    """
    max_deg = cfg.max_deg if max_deg is None else max_deg
    if max_deg < 1:
        raise ValueError("max_deg must be >= 1")
    if not is_subunit_capacity(K, cfg):
        raise CapacityAtLeastOne(f"{K} has capacity >= 1")
    tol = cfg.membership_tol
    lo, hi = K.lo - tol, K.hi + tol
    classes = []
    for d in range(1, max_deg + 1):
        for p in totally_real_candidates(lo, hi, d):
            chain = sturm_chain(p)
            if count_roots(p, chain=chain) != d:
                continue
            inside = sum(count_roots(p, a - tol, b + tol, chain) for a, b in K.intervals)
            if inside != d or not is_irreducible(p):
                continue
            classes.append(class_from_poly(p))
    classes.sort(key=lambda c: (c.degree, c.roots))
    points = tuple(sorted(r for c in classes for r in c.roots))

    witness = _witness(K, cfg)
    complete = witness is not None and witness.degree <= max_deg
    if not complete and K.is_interval:
        (a, b), = K.float_intervals
        if a == -b and 0 < b < 2:
            need = max((c.degree for c in symmetric_interval_candidates(b, cfg)), default=0)
            complete = need <= max_deg
    if witness is not None:
        assert len(points) <= witness.degree, "more kernel points than roots of a B(K) element"
    return KernelResult(tuple(classes), points, max_deg, bool(complete), witness)


@lru_cache(maxsize=32)
def _pool(K: CompactSet, size: int, cfg: Config):
    from .smallnorm import small_norm_pool

    return tuple(small_norm_pool(K, size=size, cfg=cfg))


def verify_kernel_point(x_class: ConjugateClass, K: CompactSet, trials: int = 25,
                        cfg: Config = DEFAULT) -> bool:
    """True iff ``trials`` elements of B(K) all vanish on the class.

    Vanishing is checked exactly: the remainder of P modulo the (monic)
    minimal polynomial must be zero.  The pool is built from brute-force
    small-norm polynomials, the pigeonhole construction, and their products.
    """
    if not isinstance(x_class, ConjugateClass):
        raise TypeError("expected a ConjugateClass")
    pool = _pool(K, trials, cfg)
    for P in pool[:trials]:
        _, r = poly_divmod(P, x_class.min_poly)
        if not r.is_zero:
            return False
    return True
