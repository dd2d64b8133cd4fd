"""Compact sets, dense polynomials over Z / R, and certified sup-norms.

A compact set ``K`` is restricted to a finite union of closed intervals.
Polynomials are stored as ascending coefficient tuples.  ``IntPoly`` holds
Python integers (arbitrary precision); ``RealPoly`` holds either floats or,
when built only from integers and fractions, exact ``Fraction`` values.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational, Real
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT, Config

__all__ = [
    "CompactSet",
    "RealPoly",
    "IntPoly",
    "SupNormResult",
    "parse_set",
    "contains",
    "sup_norm",
    "eval_poly",
    "eval_exact",
    "poly_divmod",
    "monic_check",
    "as_fraction",
]


def as_fraction(x) -> Fraction:
    """Exact rational value of an int, Fraction, float or decimal string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (Integral, float, str)):
        return Fraction(x)
    if isinstance(x, np.floating):
        return Fraction(float(x))
    if isinstance(x, np.integer):
        return Fraction(int(x))
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


# ---------------------------------------------------------------------------
# Compact sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompactSet:
    """Finite union of disjoint closed intervals, sorted ascending.

    Endpoints are kept as given: ``Fraction`` endpoints (from ``parse_set`` or
    explicit construction) enable the exact-rational code paths, floats the
    ordinary ones.  Numerical routines always read ``float_intervals``.
    """

    intervals: tuple

    def __post_init__(self):
        ivs = []
        for iv in self.intervals:
            lo, hi = iv
            lo, hi = _endpoint(lo), _endpoint(hi)
            if lo > hi:
                raise ValueError(f"interval [{lo}, {hi}] has lo > hi")
            ivs.append((lo, hi))
        if not ivs:
            raise ValueError("a compact set needs at least one interval")
        ivs.sort(key=lambda t: (t[0], t[1]))
        for (a, b), (c, d) in zip(ivs, ivs[1:]):
            if not b < c:
                raise ValueError("intervals must be pairwise disjoint")
        if not any(lo < hi for lo, hi in ivs):
            raise ValueError("compact set must have positive length (infinite cardinality)")
        object.__setattr__(self, "intervals", tuple(ivs))

    @classmethod
    def interval(cls, a, b) -> "CompactSet":
        return cls(((a, b),))

    @classmethod
    def parse(cls, text: str) -> "CompactSet":
        return parse_set(text)

    @property
    def float_intervals(self) -> tuple:
        return tuple((float(a), float(b)) for a, b in self.intervals)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(e, (int, Fraction)) for iv in self.intervals for e in iv)

    @property
    def lo(self) -> float:
        return float(self.intervals[0][0])

    @property
    def hi(self) -> float:
        return float(self.intervals[-1][1])

    @property
    def measure(self) -> float:
        return sum(b - a for a, b in self.float_intervals)

    @property
    def radius(self) -> float:
        """max |x| over K."""
        return max(abs(self.lo), abs(self.hi))

    @property
    def is_interval(self) -> bool:
        return len(self.intervals) == 1

    def contains(self, x, tol: float | None = None) -> bool:
        return contains(self, x, DEFAULT.membership_tol if tol is None else tol)

    def clamp(self, x: float) -> float:
        """Nearest point of K to ``x``."""
        best, dist = None, math.inf
        for a, b in self.float_intervals:
            y = min(max(x, a), b)
            if abs(y - x) < dist:
                best, dist = y, abs(y - x)
        return best

    def subset_of(self, other: "CompactSet", tol: float = 0.0) -> bool:
        return all(
            any(c - tol <= a and b <= d + tol for c, d in other.float_intervals)
            for a, b in self.float_intervals
        )

    def grid(self, n: int, kind: str = "uniform", offset: float = 0.0) -> np.ndarray:
        """About ``n`` points spread over K proportionally to interval length.

        ``kind='uniform'`` includes the endpoints; ``offset`` in [0, 1) shifts
        the interior points by that fraction of a step (independent grids).
        ``kind='cheb'`` uses Chebyshev extreme points per interval.
        """
        L = self.measure
        pts = []
        for a, b in self.float_intervals:
            if a == b:
                pts.append(np.array([a]))
                continue
            m = max(2, int(round(n * (b - a) / L)))
            if kind == "cheb":
                t = np.cos(np.pi * np.arange(m) / (m - 1))[::-1]
                pts.append(0.5 * (a + b) + 0.5 * (b - a) * t)
            elif offset:
                step = (b - a) / (m - 1)
                inner = a + step * (np.arange(m - 1) + offset)
                pts.append(np.concatenate([[a], inner[inner < b], [b]]))
            else:
                pts.append(np.linspace(a, b, m))
        return np.concatenate(pts)

    def random_points(self, n: int, rng: np.random.Generator) -> np.ndarray:
        ivs = np.array(self.float_intervals)
        w = ivs[:, 1] - ivs[:, 0]
        idx = rng.choice(len(ivs), size=n, p=w / w.sum())
        return ivs[idx, 0] + rng.random(n) * w[idx]

    def __str__(self) -> str:
        return " U ".join(f"[{_fmt_endpoint(a)},{_fmt_endpoint(b)}]" for a, b in self.intervals)


def _endpoint(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Integral):
        return int(x)
    if isinstance(x, str):
        return _endpoint(Fraction(x))
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("endpoints must be finite")
    return x


def _fmt_endpoint(x) -> str:
    return str(x) if not isinstance(x, float) else repr(x)


_SET_RE = re.compile(r"\[\s*([^,\]]+?)\s*,\s*([^\]]+?)\s*\]")


def parse_set(text: str) -> CompactSet:
    """Parse ``"[a,b]"`` or ``"[a,b] U [c,d] U ..."``.

    Endpoints may be integers, decimals or rationals such as ``1/4``; they are
    stored exactly as fractions.
    """
    pieces = re.split(r"\s*(?:U|u|∪)\s*", text.strip())
    intervals = []
    for piece in pieces:
        m = _SET_RE.fullmatch(piece.strip())
        if not m:
            raise ValueError(f"cannot parse interval {piece!r} in {text!r}")
        try:
            intervals.append((Fraction(m.group(1)), Fraction(m.group(2))))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad endpoint in {piece!r}") from exc
    return CompactSet(tuple(intervals))


def contains(K: CompactSet, x, tol: float = 0.0) -> bool:
    """True iff ``x`` lies within ``tol`` of some interval of K."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    if isinstance(x, (Fraction, Integral)) and K.is_exact and tol == 0:
        return any(a <= x <= b for a, b in K.intervals)
    x = float(x)
    return any(a - tol <= x <= b + tol for a, b in K.float_intervals)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


def _strip(coeffs: list) -> tuple:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class _Poly:
    """Shared arithmetic; subclasses fix the coefficient ring."""

    __slots__ = ("coeffs", "_exact_cache")

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _strip([self._coerce(c) for c in coeffs]))
        object.__setattr__(self, "_exact_cache", None)

    def __setattr__(self, name, value):
        raise AttributeError("polynomials are immutable")

    # construction helpers ------------------------------------------------
    @classmethod
    def monomial(cls, n: int, c=1):
        return cls([0] * n + [c])

    @classmethod
    def x(cls):
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots):
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    # properties ----------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        if isinstance(other, _Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, Real):
            return self.coeffs == _strip([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"{type(self).__name__}({list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            coef = "" if (mag == 1 and i > 0) else str(mag)
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            body = f"{coef}*{mono}" if coef and mono else (coef or mono)
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    # arithmetic ----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, _Poly):
            return other
        if isinstance(other, Integral) and isinstance(self, IntPoly):
            return IntPoly([other])
        if isinstance(other, Real):
            return RealPoly([other])
        return NotImplemented

    @staticmethod
    def _result_cls(a, b):
        return IntPoly if isinstance(a, IntPoly) and isinstance(b, IntPoly) else RealPoly

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return self._result_cls(self, other)([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return type(self)([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Real) and not isinstance(other, _Poly):
            if isinstance(self, IntPoly) and isinstance(other, Integral):
                return IntPoly([c * other for c in self.coeffs])
            return RealPoly([c * other for c in self.coeffs])
        other = self._lift(other)
        if other is NotImplemented:
            return other
        cls = self._result_cls(self, other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return cls([])
        if cls is RealPoly and (_is_float(a) or _is_float(b)):
            return cls(np.convolve(np.asarray(a, float), np.asarray(b, float)).tolist())
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return cls(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = type(self)([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def compose(self, inner: "_Poly"):
        """self(inner(T))."""
        cls = self._result_cls(self, inner) if isinstance(inner, _Poly) else RealPoly
        result = cls([])
        for c in reversed(self.coeffs):
            result = result * inner + cls([c])
        return result

    def derivative(self):
        return type(self)([i * c for i, c in enumerate(self.coeffs)][1:])

    def to_real(self) -> "RealPoly":
        return RealPoly([float(c) for c in self.coeffs])

    def to_exact(self) -> "RealPoly":
        return RealPoly([as_fraction(c) for c in self.coeffs])

    def float_coeffs(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs], dtype=float)

    # evaluation ----------------------------------------------------------
    def __call__(self, x):
        return eval_poly(self, x)

    def eval_exact(self, x) -> Fraction:
        return eval_exact(self, x)

    def _exact_parts(self):
        """(integer numerators, common denominator) of the coefficients."""
        if self._exact_cache is None:
            fr = [as_fraction(c) for c in self.coeffs]
            den = 1
            for f in fr:
                den = den * f.denominator // math.gcd(den, f.denominator)
            nums = [f.numerator * (den // f.denominator) for f in fr]
            object.__setattr__(self, "_exact_cache", (nums, den))
        return self._exact_cache


def _is_float(coeffs) -> bool:
    return any(isinstance(c, float) for c in coeffs)


class RealPoly(_Poly):
    """Polynomial with real coefficients.

    If every input coefficient is an int or Fraction the polynomial is exact
    (stored as Fractions); otherwise all coefficients become floats.
    """

    __slots__ = ()

    def __init__(self, coeffs: Iterable = ()):
        coeffs = list(coeffs)
        exact = all(isinstance(c, (Integral, Fraction)) and not isinstance(c, bool) or
                    isinstance(c, np.integer) for c in coeffs)
        if exact:
            coeffs = [Fraction(int(c)) if isinstance(c, (Integral, np.integer)) else c for c in coeffs]
        else:
            coeffs = [float(c) for c in coeffs]
        object.__setattr__(self, "coeffs", _strip(coeffs))
        object.__setattr__(self, "_exact_cache", None)

    @staticmethod
    def _coerce(c):  # pragma: no cover - RealPoly overrides __init__
        return c

    @property
    def is_exact(self) -> bool:
        return not _is_float(self.coeffs)


class IntPoly(_Poly):
    """Polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ()

    @staticmethod
    def _coerce(c):
        if isinstance(c, (Integral, np.integer)):
            return int(c)
        if isinstance(c, Fraction) and c.denominator == 1:
            return c.numerator
        if isinstance(c, float) and c.is_integer():
            return int(c)
        raise ValueError(f"IntPoly coefficient {c!r} is not an integer")

    @classmethod
    def round_from(cls, p: _Poly, tol: float) -> "IntPoly":
        """Round coefficients to integers, insisting each is within ``tol``."""
        out = []
        for c in p.coeffs:
            r = round(c)
            if abs(c - r) > tol:
                raise ValueError(f"coefficient {c} is not within {tol} of an integer")
            out.append(int(r))
        return cls(out)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def to_json(self) -> list:
        return [str(c) for c in self.coeffs]


def monic_check(p: _Poly) -> bool:
    return p.is_monic()


def poly_divmod(a: _Poly, b: _Poly):
    """Exact polynomial division; integer result when b is monic IntPoly."""
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    ints = isinstance(a, IntPoly) and isinstance(b, IntPoly) and b.leading in (1, -1)
    if _is_float(a.coeffs) or _is_float(b.coeffs):
        num = [float(c) for c in a.coeffs]
        den = [float(c) for c in b.coeffs]
        lead = den[-1]
    else:
        num = [c if ints else as_fraction(c) for c in a.coeffs]
        den = [c if ints else as_fraction(c) for c in b.coeffs]
        lead = den[-1]
    db = len(den) - 1
    q = [0] * max(len(num) - db, 0)
    for i in range(len(num) - 1, db - 1, -1):
        c = num[i]
        if c == 0:
            continue
        f = c // lead if ints else c / lead
        q[i - db] = f
        for j in range(db + 1):
            num[i - db + j] -= f * den[j]
    cls = IntPoly if ints else RealPoly
    return cls(q), cls(num[:db])


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

_U = np.finfo(float).eps / 2


def eval_poly(p: _Poly, x):
    """Floating-point Horner evaluation; ``x`` may be a scalar or array."""
    c = p.float_coeffs()
    xs = np.asarray(x, dtype=float)
    acc = np.zeros_like(xs)
    for ci in c[::-1]:
        acc = acc * xs + ci
    return float(acc) if acc.ndim == 0 else acc


def _eval_with_bound(p: _Poly, xs: np.ndarray):
    """Horner values plus a rigorous-in-spirit a posteriori rounding bound."""
    c = p.float_coeffs()
    ax = np.abs(xs)
    acc = np.zeros_like(xs)
    mag = np.zeros_like(xs)
    for ci in c[::-1]:
        acc = acc * xs + ci
        mag = mag * ax + abs(ci)
    n = max(len(c), 1)
    conv = 0.0 if (isinstance(p, RealPoly) and not p.is_exact) else _U
    return acc, (2 * n * _U / (1 - 2 * n * _U) + conv) * mag + 1e-300


def eval_exact(p: _Poly, x) -> Fraction:
    """Exact value of ``p`` at a rational (or float, read exactly) point."""
    if p.is_zero:
        return Fraction(0)
    xf = as_fraction(x)
    a, b = xf.numerator, xf.denominator
    nums, den = p._exact_parts()
    d = len(nums) - 1
    s = nums[d]
    bpow = 1
    for i in range(d - 1, -1, -1):
        bpow *= b
        s = s * a + nums[i] * bpow
    return Fraction(s, den * bpow)


def accurate_eval(p: _Poly, xs, rtol: float = DEFAULT.eval_rtol, scale: float | None = None):
    """Values of ``p`` at ``xs`` with error at most ``rtol * scale``.

    Float Horner is used where its error bound allows; remaining points are
    re-evaluated exactly (coefficients and floats are exact rationals) and
    rounded once.  ``scale`` defaults to the largest value magnitude seen.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    vals, bounds = _eval_with_bound(p, xs)
    if not np.all(np.isfinite(vals)):
        bad = ~np.isfinite(vals)
        bounds[bad] = np.inf
        vals[bad] = 0.0
    if scale is None:
        approx = np.abs(vals) - bounds
        scale = float(max(approx.max(initial=0.0), 0.0))
        if scale == 0.0:
            scale = float(np.abs(vals).max(initial=0.0))
    need = bounds > rtol * max(scale, 1e-300)
    if np.any(need):
        for i in np.flatnonzero(need):
            vals[i] = float(eval_exact(p, xs[i]))
    return vals


# ---------------------------------------------------------------------------
# Sup norm
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupNormResult:
    value: float
    witness: float
    certified_lower: float
    certified_upper: float


def _real_critical_points(p: _Poly, a: float, b: float) -> list:
    dp = p.derivative()
    if dp.degree < 1:
        return []
    try:
        c = dp.float_coeffs()
    except OverflowError:
        return []
    if not np.all(np.isfinite(c)):
        return []
    try:
        with np.errstate(all="ignore"):
            roots = np.roots(c[::-1])
    except np.linalg.LinAlgError:
        # a subnormal leading term overflows the companion matrix; the grid
        # and golden-section refinement still cover the interior
        return []
    span = max(b - a, 1e-300)
    out = []
    ddp = dp.derivative()
    for r in roots:
        if abs(r.imag) > 1e-6 * (1 + abs(r.real)):
            continue
        x = r.real
        if not a - span <= x <= b + span:
            continue
        for _ in range(3):
            d2 = eval_poly(ddp, x)
            if d2 == 0 or not math.isfinite(d2):
                break
            step = eval_poly(dp, x) / d2
            if not math.isfinite(step) or abs(step) > span:
                break
            x -= step
        if a - 1e-12 * span <= x <= b + 1e-12 * span:
            out.append(min(max(x, a), b))
    return out


def _golden_refine(p, lo, hi, rtol, scale, iters=80):
    """Maximise |p| on each bracket [lo_i, hi_i] (vectorised golden section)."""
    g = (math.sqrt(5) - 1) / 2
    lo = lo.copy()
    hi = hi.copy()
    c = hi - g * (hi - lo)
    d = lo + g * (hi - lo)
    fc = np.abs(accurate_eval(p, c, rtol, scale))
    fd = np.abs(accurate_eval(p, d, rtol, scale))
    for _ in range(iters):
        left = fc >= fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        new_c = hi - g * (hi - lo)
        new_d = lo + g * (hi - lo)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        fc_next = np.where(left, 0.0, fd)
        fd_next = np.where(left, fc, 0.0)
        if np.any(left):
            fc_next[left] = np.abs(accurate_eval(p, c_next[left], rtol, scale))
        if np.any(~left):
            fd_next[~left] = np.abs(accurate_eval(p, d_next[~left], rtol, scale))
        c, d, fc, fd = c_next, d_next, fc_next, fd_next
        if np.all(hi - lo <= 1e-15 * (1 + np.abs(hi))):
            break
    x = np.where(fc >= fd, c, d)
    return x


def sup_norm(p: _Poly, K: CompactSet, cfg: Config = DEFAULT) -> SupNormResult:
    """max over K of |p|, with a witness point and certified bracket.

    Candidates are interval endpoints, real critical points (companion-matrix
    roots of p' polished by Newton) and a Chebyshev grid per interval whose
    best points are refined by golden section.  The upper bound uses the
    Ehlich-Zeller inequality on the Chebyshev grid.
    """
    if p.is_zero:
        return SupNormResult(0.0, K.lo, 0.0, 0.0)
    if p.degree == 0:
        v = abs(float(p.coeffs[0]))
        return SupNormResult(v, K.lo, v, v)
    D = p.degree
    M = max(64, cfg.sup_grid_factor * D)
    ez = 1.0 / math.cos(D * math.pi / (2 * M))
    j = np.arange(1, M + 1)
    nodes = np.cos((2 * j - 1) * math.pi / (2 * M))[::-1]

    grid_pts, cand_pts, brackets = [], [], []
    for a, b in K.float_intervals:
        if a == b:
            cand_pts.append(np.array([a]))
            continue
        g = 0.5 * (a + b) + 0.5 * (b - a) * nodes
        grid_pts.append(g)
        cand_pts.append(np.array([a, b] + _real_critical_points(p, a, b)))
        ext = np.concatenate([[a], g, [b]])
        brackets.append(ext)
    grid = np.concatenate(grid_pts) if grid_pts else np.empty(0)
    cands = np.concatenate(cand_pts)

    cand_vals = np.abs(accurate_eval(p, cands, cfg.eval_rtol))
    scale = float(cand_vals.max())
    if grid.size:
        grid_vals = np.abs(accurate_eval(p, grid, cfg.eval_rtol, None))
        scale = max(scale, float(grid_vals.max()))
        grid_max = float(grid_vals.max())
        # refine around the best grid points of every interval
        lo_b, hi_b, offset = [], [], 0
        for ext in brackets:
            m = len(ext) - 2
            vals = grid_vals[offset:offset + m]
            offset += m
            top = np.argsort(vals)[-min(4, m):]
            for t in top:
                lo_b.append(ext[t])
                hi_b.append(ext[t + 2])
        ref = _golden_refine(p, np.array(lo_b), np.array(hi_b), cfg.eval_rtol, scale)
        ref_vals = np.abs(accurate_eval(p, ref, cfg.eval_rtol, scale))
        cands = np.concatenate([cands, ref, grid])
        cand_vals = np.concatenate([cand_vals, ref_vals, grid_vals])
    else:
        grid_max = 0.0

    k = int(np.argmax(cand_vals))
    # ties: smallest witness
    ties = np.flatnonzero(cand_vals == cand_vals[k])
    k = int(ties[np.argmin(cands[ties])])
    value = float(cand_vals[k])
    witness = float(cands[k])
    err = value * cfg.eval_rtol + 4 * _U * value
    lower = max(value - err, 0.0)
    upper = max(value, ez * grid_max * (1 + 4 * _U) + err)
    return SupNormResult(value, witness, float(lower), float(upper))
