"""Uniform approximation of continuous functions by integer polynomials.

On a set of capacity < 1 a continuous f is a uniform limit of polynomials
in Z[T] exactly when it agrees with an integer polynomial R on the kernel
J(K).  The construction below follows that proof: subtract R, build an
integer Q vanishing in K exactly on J(K) with |Q|_K, |TQ|_K < delta, fit f - R
by a bivariate polynomial in (Q^k, T Q^k) without constant term, and floor
its coefficients.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
import sympy

from .capacity import is_subunit_capacity
from .config import DEFAULT, Config
from .core import CompactSet, IntPoly, RealPoly, accurate_eval, as_fraction, eval_exact, poly_divmod, sup_norm
from .errors import (BudgetExceeded, CapacityAtLeastOne, HypothesisViolated, KernelIncompleteWarning,
                     NotInterpolable)
from .kernel import ConjugateClass, KernelResult, class_from_poly, enumerate_kernel

__all__ = [
    "TargetFunction",
    "BivariatePoly",
    "ApproxResult",
    "parse_target",
    "is_interpolable",
    "approximate",
    "k_schedule",
    "dense_interpolate",
    "certify_dense",
    "j0_reduction",
]


# ---------------------------------------------------------------------------
# targets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TargetFunction:
    """A continuous f on K: a real polynomial or a piecewise-linear table."""

    kind: str
    real_poly: RealPoly | None = None
    samples: tuple | None = None
    lipschitz: float | None = None

    def __post_init__(self):
        if self.kind == "real_poly":
            if self.real_poly is None:
                raise ValueError("real_poly target needs a polynomial")
        elif self.kind == "sample_table":
            if not self.samples or len(self.samples) < 2:
                raise ValueError("sample table needs at least two samples")
            xs = [x for x, _ in self.samples]
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise ValueError("sample x-values must be strictly increasing")
        else:
            raise ValueError(f"unknown target kind {self.kind!r}")

    @classmethod
    def from_poly(cls, p) -> "TargetFunction":
        if not isinstance(p, (RealPoly, IntPoly)):
            p = RealPoly(p)
        return cls("real_poly", real_poly=RealPoly(p.coeffs))

    @classmethod
    def constant(cls, c) -> "TargetFunction":
        return cls.from_poly(RealPoly([c]))

    @classmethod
    def from_samples(cls, xs, ys, lipschitz=None) -> "TargetFunction":
        return cls("sample_table", samples=tuple((float(x), float(y)) for x, y in zip(xs, ys)),
                   lipschitz=lipschitz)

    def check_domain(self, K: CompactSet, tol: float = DEFAULT.membership_tol):
        if self.kind != "sample_table":
            return
        for x, _ in self.samples:
            if not K.contains(x, tol):
                raise ValueError(f"sample point {x} lies outside {K}")
        for a, b in K.float_intervals:
            inside = sum(1 for x, _ in self.samples if a - tol <= x <= b + tol)
            if inside < 2:
                raise ValueError(f"interval [{a}, {b}] needs at least two samples")

    def integer_poly(self) -> IntPoly | None:
        """The target as an IntPoly when it is one exactly."""
        if self.kind != "real_poly":
            return None
        try:
            return IntPoly(self.real_poly.coeffs)
        except ValueError:
            return None

    def __call__(self, x, K: CompactSet | None = None):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        if self.kind == "real_poly":
            out = accurate_eval(self.real_poly, xs) if not self.real_poly.is_zero else np.zeros_like(xs)
        else:
            sx = np.array([s[0] for s in self.samples])
            sy = np.array([s[1] for s in self.samples])
            out = np.interp(xs, sx, sy)
            if K is not None:
                # interpolate within each piece of K separately
                for a, b in K.float_intervals:
                    sel = (sx >= a - 1e-12) & (sx <= b + 1e-12)
                    on = (xs >= a - 1e-12) & (xs <= b + 1e-12)
                    if sel.sum() >= 2 and on.any():
                        out[on] = np.interp(xs[on], sx[sel], sy[sel])
        return float(out[0]) if np.ndim(x) == 0 else out

    def minus(self, R: IntPoly, K: CompactSet) -> "TargetFunction":
        """f - R as a target of the same kind (sample tables are resampled)."""
        if R.is_zero:
            return self
        if self.kind == "real_poly":
            return TargetFunction.from_poly(self.real_poly - RealPoly(R.coeffs))
        xs = np.array([s[0] for s in self.samples])
        return TargetFunction.from_samples(xs, self(xs, K) - accurate_eval(R, xs), self.lipschitz)


def parse_target(text: str) -> TargetFunction:
    """``poly:c0,c1,...`` (ascending, rationals allowed) or a CSV path with x,y header."""
    if text.startswith("poly:"):
        body = text[5:].strip()
        if not body:
            raise ValueError("empty coefficient list in poly: target")
        coeffs = [as_fraction(_num(tok)) for tok in body.split(",")]
        return TargetFunction.from_poly(RealPoly(coeffs))
    with open(text, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [h.strip().lower() for h in rows[0][:2]] != ["x", "y"]:
        raise ValueError("sample CSV needs a header row 'x,y'")
    pairs = sorted((float(r[0]), float(r[1])) for r in rows[1:] if r)
    return TargetFunction.from_samples([p[0] for p in pairs], [p[1] for p in pairs])


def _num(tok: str):
    tok = tok.strip()
    try:
        return Fraction(tok)
    except ValueError:
        return float(tok)


# ---------------------------------------------------------------------------
# interpolability on J(K)
# ---------------------------------------------------------------------------


def _mp_roots(p: IntPoly, dps: int = 60):
    with mpmath.workdps(dps):
        rs = mpmath.polyroots([int(c) for c in p.coeffs[::-1]], maxsteps=200, extraprec=4 * dps)
        return sorted(mpmath.re(r) for r in rs)


def _class_values(f: TargetFunction, cls: ConjugateClass, K: CompactSet | None):
    return np.array([f(float(x), K) for x in cls.roots])


def _lagrange_coeffs(xs, ys):
    """Ascending coefficients of the interpolant of degree < len(xs)."""
    V = np.vander(np.asarray(xs, float), len(xs), increasing=True)
    return np.linalg.solve(V, np.asarray(ys, float))


def _crt(remainders: list[IntPoly], moduli: list[IntPoly]) -> IntPoly | None:
    """The R of degree < sum deg with R = r_j mod p_j, if it is integral.

    The conditions are a square linear system over the rationals in the
    coefficients of R.  Any integer solution reduces (p_j monic) to one of
    degree < sum deg, which is then the unique rational solution; so the
    system decides integrality exactly.
    """
    D = sum(p.degree for p in moduli)
    rows, rhs = [], []
    for r, p in zip(remainders, moduli):
        d = p.degree
        # column t: coefficients of T^t mod p
        cols = []
        for t in range(D):
            _, rem = poly_divmod(IntPoly.monomial(t), p)
            cols.append(list(rem.coeffs) + [0] * (d - len(rem.coeffs)))
        for i in range(d):
            rows.append([cols[t][i] for t in range(D)])
            rhs.append(r.coeffs[i] if i < len(r.coeffs) else 0)
    sol = sympy.Matrix(rows).LUsolve(sympy.Matrix(rhs))
    vals = [sympy.Rational(v) for v in sol]
    if any(v.q != 1 for v in vals):
        return None
    return IntPoly([int(v) for v in vals])


def is_interpolable(f: TargetFunction, kernel: KernelResult, tol: float | None = None,
                    K: CompactSet | None = None, cfg: Config = DEFAULT):
    """(True, R) when some R in Z[T] equals f on every kernel class, else (False, None).

    Per class the Lagrange interpolant of f at the roots must have integer
    coefficients (within ``tol``); the class remainders are then combined
    by an exact rational solve, and R is validated on all kernel points.
    Warns with ``KernelIncompleteWarning`` when the kernel search was not
    provably exhaustive.
    """
    tol = cfg.interp_tol if tol is None else tol
    if not kernel.complete:
        warnings.warn("kernel search not provably complete: interpolability is only necessary",
                      KernelIncompleteWarning, stacklevel=2)
    exact = f.integer_poly()
    if exact is not None:
        return True, exact
    if not kernel.classes:
        return True, IntPoly([])
    rems, mods = [], []
    for cls in kernel.classes:
        ys = _class_values(f, cls, K)
        c = _lagrange_coeffs(cls.roots, ys)
        r = np.round(c)
        if np.any(np.abs(c - r) > tol * max(1.0, float(np.abs(c).max()))):
            return False, None
        rems.append(IntPoly([int(v) for v in r]))
        mods.append(cls.min_poly)
    R = _crt(rems, mods)
    if R is None:
        return False, None
    pts = np.array(kernel.points)
    err = np.abs(accurate_eval(R, pts) - f(pts, K)) if len(pts) else np.zeros(0)
    if np.any(err > tol * max(1.0, float(np.abs(f(pts, K)).max()))):
        return False, None
    return True, R


# ---------------------------------------------------------------------------
# the construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BivariatePoly:
    """sum c[i][j] u^i v^j over i + j <= degree; constant term optionally forced to 0."""

    coeffs: tuple
    zero_constant: bool = True

    def __post_init__(self):
        if self.zero_constant and self.coeffs and self.coeffs[0] and self.coeffs[0][0] != 0:
            raise ValueError("constant term must vanish")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, u, v):
        u, v = np.asarray(u, float), np.asarray(v, float)
        out = np.zeros(np.broadcast(u, v).shape)
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                if c:
                    out = out + float(c) * u ** i * v ** j
        return out

    def floor(self) -> "BivariatePoly":
        return BivariatePoly(tuple(tuple(math.floor(c) for c in row) for row in self.coeffs),
                             self.zero_constant)

    def compose(self, U: IntPoly, T_factor: IntPoly) -> IntPoly:
        """S(U, T U) as an IntPoly (integer coefficients required)."""
        out = IntPoly([])
        Upow = IntPoly([1])
        N = self.degree
        for s in range(N + 1):
            inner = [0] * (s + 1)
            for j in range(s + 1):
                i = s - j
                if i < len(self.coeffs) and j < len(self.coeffs[i]):
                    inner[j] = int(self.coeffs[i][j])
            if any(inner):
                out = out + Upow * IntPoly(inner)
            Upow = Upow * U
        return out


@dataclass(frozen=True)
class ApproxResult:
    poly: IntPoly
    achieved_error: float
    epsilon_requested: float
    q_used: RealPoly
    k_used: int
    bivariate_degree: int
    status: str = "ok"
    extra: dict = field(default_factory=dict, compare=False)

    def evaluate(self, xs) -> np.ndarray:
        """Values of ``poly`` at ``xs`` (structural evaluation when available)."""
        ev = self.extra.get("evaluator")
        return ev(xs) if ev is not None else accurate_eval(self.poly, xs)

    def error_on(self, f: "TargetFunction", K: CompactSet, n: int, offset: float = 0.0) -> float:
        """Grid sup of |poly - f| on ``n`` points of K shifted by ``offset``."""
        xs = K.grid(n, kind="uniform", offset=offset)
        return float(np.abs(self.evaluate(xs) - f(xs, K)).max())

    def to_dict(self) -> dict:
        return {
            "coefficients": self.poly.to_json(),
            "achieved_error": self.achieved_error,
            "epsilon": self.epsilon_requested,
            "k_used": self.k_used,
            "bivariate_degree": self.bivariate_degree,
            "status": self.status,
        }


def k_schedule(epsilon: float):
    """(delta, k): delta = min(1/4, eps/8) and the least k with
    sum_{j>=k} (j+1) delta^j = delta^k (k(1-delta)+1)/(1-delta)^2 < eps/2."""
    delta = min(0.25, epsilon / 8)
    k = 1
    while delta ** k * (k * (1 - delta) + 1) / (1 - delta) ** 2 >= epsilon / 2:
        k += 1
    return delta, k


def _factor(p: IntPoly) -> list[IntPoly]:
    x = sympy.Symbol("x")
    _, facs = sympy.factor_list(sympy.Poly(list(reversed(p.coeffs)), x, domain="ZZ"))
    out = []
    for g, _ in facs:
        c = [int(v) for v in reversed(g.all_coeffs())]
        if c[-1] < 0:
            c = [-v for v in c]
        out.append(IntPoly(c))
    return out


def _killers(K: CompactSet, kernel: KernelResult, Q0: IntPoly, cfg: Config) -> list[IntPoly]:
    """Q_0 plus elements of B(K) that do not vanish at the non-kernel zeros of Q_0 in K."""
    from .smallnorm import small_norm_pool

    kernel_polys = {c.min_poly.coeffs for c in kernel.classes}
    bad = []
    for g in _factor(Q0):
        if g.degree < 1 or g.coeffs in kernel_polys:
            continue
        if g.is_monic() and g.degree:
            try:
                cls = class_from_poly(g)
                inside = any(K.contains(r, cfg.membership_tol) for r in cls.roots)
            except ValueError:
                inside = True
        else:
            roots = np.roots([float(c) for c in g.coeffs[::-1]])
            inside = any(abs(r.imag) < 1e-9 and K.contains(r.real, 1e-6) for r in roots)
        if inside:
            bad.append(g)
    out = [Q0]
    if not bad:
        return out
    pool = small_norm_pool(K, size=cfg.pool_size, cfg=cfg)
    for g in bad:
        for P in pool:
            _, r = poly_divmod(P * IntPoly([g.leading ** P.degree]), g) if not g.is_monic() else poly_divmod(P, g)
            if not r.is_zero:
                if P not in out:
                    out.append(P)
                break
        else:
            raise BudgetExceeded(f"no element of the B(K) pool avoids the zeros of {g}")
    return out


def _build_q(K, kernel, delta, cfg):
    from .smallnorm import construct_small_norm

    Q0 = kernel.witness
    if Q0 is None:
        Q0 = construct_small_norm(K, cfg=cfg).result
    parts = _killers(K, kernel, Q0, cfg)
    for n in range(1, cfg.max_square_power + 1):
        Q = IntPoly([])
        for P in parts:
            Q = Q + P ** (2 * n)
        a = sup_norm(Q, K, cfg).certified_upper
        b = sup_norm(Q * IntPoly([0, 1]), K, cfg).certified_upper
        if max(a, b) < delta:
            return Q, parts, n
    raise BudgetExceeded(f"max(|Q|, |TQ|) >= {delta} up to n = {cfg.max_square_power}")


def _cheb_to_monomial(alpha: Fraction, beta: Fraction, N: int) -> list:
    """M[a][i]: coefficient of w^i in T_a(alpha w + beta), exactly."""
    lin = [beta, alpha]
    rows = [[Fraction(1)], lin[:]]
    for _ in range(2, N + 1):
        prev, cur = rows[-2], rows[-1]
        nxt = [Fraction(0)] * (len(cur) + 1)
        for i, c in enumerate(cur):
            nxt[i] += 2 * beta * c
            nxt[i + 1] += 2 * alpha * c
        for i, c in enumerate(prev):
            nxt[i] -= c
        rows.append(nxt)
    return rows[: N + 1]


def _affine(w):
    lo, hi = float(w.min()), float(w.max())
    if hi - lo <= 1e-300 * max(1.0, abs(hi)):
        hi = lo + max(abs(lo), 1e-300)
    alpha = 2.0 / (hi - lo)
    beta = -(hi + lo) / (hi - lo)
    return alpha, beta


def _fit(gvals, u, v, N, rcond=1e-8):
    """Least-squares S~(u, v) of total degree N with S~(0, 0) = 0.

    The fit uses products of Chebyshev polynomials in affinely rescaled u and
    v (same span as the monomials u^i v^j, far better conditioned); the
    zero-constant condition is imposed on a null space.  Coefficients are
    then converted to the monomial basis exactly.
    """
    au, bu = _affine(u)
    av, bv = _affine(v)
    uh, vh = au * u + bu, av * v + bv
    Tu = np.polynomial.chebyshev.chebvander(uh, N)
    Tv = np.polynomial.chebyshev.chebvander(vh, N)
    idx = [(a, b) for a in range(N + 1) for b in range(N + 1 - a)]
    A = np.column_stack([Tu[:, a] * Tv[:, b] for a, b in idx])
    t0u = np.polynomial.chebyshev.chebvander(np.array([bu]), N)[0]
    t0v = np.polynomial.chebyshev.chebvander(np.array([bv]), N)[0]
    r = np.array([t0u[a] * t0v[b] for a, b in idx])
    # orthonormal basis of {a : r . a = 0}
    Qr, _ = np.linalg.qr(np.column_stack([r, np.eye(len(r))]))
    Z = Qr[:, 1:len(r)]
    # the truncation keeps coefficients moderate so the Chebyshev form can be
    # evaluated stably later; the residual is checked anyway
    y, *_ = np.linalg.lstsq(A @ Z, gvals, rcond=rcond)
    coef = Z @ y
    fit_err = float(np.abs(A @ coef - gvals).max())
    Mu = _cheb_to_monomial(Fraction(au), Fraction(bu), N)
    Mv = _cheb_to_monomial(Fraction(av), Fraction(bv), N)
    grid = [[Fraction(0)] * (N + 1 - i) for i in range(N + 1)]
    for (a, b), c in zip(idx, coef):
        if c == 0:
            continue
        c = Fraction(float(c))
        for i, mu in enumerate(Mu[a]):
            if mu:
                cm = c * mu
                row = grid[i]
                for j, mv in enumerate(Mv[b]):
                    if mv:
                        row[j] += cm * mv
    grid[0][0] = Fraction(0)

    def stable(uu, vv):
        Tu_ = np.polynomial.chebyshev.chebvander(au * uu + bu, N)
        Tv_ = np.polynomial.chebyshev.chebvander(av * vv + bv, N)
        return np.column_stack([Tu_[:, a] * Tv_[:, b] for a, b in idx]) @ coef

    return BivariatePoly(tuple(tuple(row) for row in grid)), fit_err, stable


class _Evaluator:
    """Values of S(Q^k, T Q^k) + R without touching its huge coefficients.

    S = S~ - F with F = S~ - floor(S~) (coefficients in [0, 1)); S~ is
    evaluated in the Chebyshev form it was fitted in and F directly, both
    from float values of u = Q^k and v = T u.
    """

    def __init__(self, parts, n, k, S_tilde, stable, R):
        self.parts, self.n, self.k = parts, n, k
        self.stable, self.R = stable, R
        self.frac = [(i, j, float(c - math.floor(c)))
                     for i, row in enumerate(S_tilde.coeffs) for j, c in enumerate(row) if c != math.floor(c)]

    def __call__(self, xs):
        xs = np.asarray(xs, float)
        q = sum(accurate_eval(P, xs) ** (2 * self.n) for P in self.parts)
        u = q ** self.k
        v = xs * u
        F = np.zeros_like(xs)
        for i, j, c in self.frac:
            F += c * u ** i * v ** j
        return self.stable(u, v) - F + (accurate_eval(self.R, xs) if not self.R.is_zero else 0.0)


def _certified_error(P: IntPoly, ev, f: TargetFunction, K: CompactSet, n: int, offset: float = 0.0,
                     n_exact: int = 40):
    """Grid sup of |P - f| from the structural evaluator, with the worst points
    and an even subsample re-evaluated exactly.  Returns (error, max gap)."""
    xs = K.grid(n, kind="uniform", offset=offset)
    fx = f(xs, K)
    vals = ev(xs)
    err = np.abs(vals - fx)
    pick = np.unique(np.concatenate([np.argsort(err)[-n_exact // 2:],
                                     np.linspace(0, len(xs) - 1, n_exact // 2).astype(int)]))
    exact = np.array([float(eval_exact(P, xs[i])) for i in pick])
    gap = float(np.abs(exact - vals[pick]).max())
    err[pick] = np.abs(exact - fx[pick])
    return float(err.max()), gap


def approximate(f: TargetFunction, K: CompactSet, epsilon: float, cfg: Config = DEFAULT,
                kernel: KernelResult | None = None) -> ApproxResult:
    """Integer polynomial within ``epsilon`` of f on K (certified on a grid).

    Raises ``NotInterpolable`` when f does not agree with an integer
    polynomial on J(K), ``CapacityAtLeastOne`` when cap(K) >= 1 and
    ``BudgetExceeded`` when the bivariate degree cap is reached.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if not is_subunit_capacity(K, cfg):
        raise CapacityAtLeastOne(f"{K} has capacity >= 1: Z[T] is discrete there")
    f.check_domain(K, cfg.membership_tol)
    exact = f.integer_poly()
    if exact is not None:
        return ApproxResult(exact, 0.0, epsilon, RealPoly([0]), 0, 0, "ok", {"short_circuit": True})

    kernel = enumerate_kernel(K, cfg.max_deg, cfg) if kernel is None else kernel
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", KernelIncompleteWarning)
        ok, R = is_interpolable(f, kernel, cfg.interp_tol, K, cfg)
    if not kernel.complete:
        warnings.warn("kernel search not provably complete", KernelIncompleteWarning, stacklevel=2)
    if not ok:
        raise NotInterpolable("f is not the restriction of an integer polynomial on J(K)")
    g = f.minus(R, K)

    delta, k = k_schedule(epsilon)
    Q, parts, n = _build_q(K, kernel, delta, cfg)
    xs = K.grid(cfg.fit_grid, kind="cheb")
    qv = sum(accurate_eval(P, xs) ** (2 * n) for P in parts)
    u = qv ** k
    v = xs * u
    gv = g(xs, K)
    U = Q ** k
    N = 1
    while True:
        S_tilde, fit_err, stable = _fit(gv, u, v, N, cfg.fit_rcond)
        if fit_err < epsilon / 2:
            S = S_tilde.floor()
            P = S.compose(U, IntPoly([0, 1])) + R
            ev = _Evaluator(parts, n, k, S_tilde, stable, R)
            err, gap = _certified_error(P, ev, f, K, cfg.eval_grid)
            if gap > 1e-7:
                raise AssertionError(f"structural and exact evaluation disagree by {gap}")
            if err <= epsilon:
                return ApproxResult(P, err, epsilon, RealPoly(Q.coeffs), k, N, "ok",
                                    {"n": n, "delta": delta, "fit_error": fit_err, "R": R,
                                     "S": S, "killers": parts, "evaluator": ev, "exact_gap": gap})
        if N >= cfg.max_bideg:
            raise BudgetExceeded(f"bivariate degree cap {cfg.max_bideg} reached (fit error {fit_err:.3g})")
        N = min(2 * N, cfg.max_bideg)


# ---------------------------------------------------------------------------
# density at algebraic points
# ---------------------------------------------------------------------------


def _normalise_targets(cls: ConjugateClass, ys):
    if isinstance(ys, dict):
        items = sorted(ys.items())
    else:
        items = [(i, y) for i, y in enumerate(ys) if y is not None]
    for i, _ in items:
        if not 0 <= i < cls.degree:
            raise IndexError(f"root index {i} out of range")
    return items


def _base_q0(xs: np.ndarray, d: int, max_box: int = 64):
    """Nonzero Q0 in Z[T], deg < d, with max |Q0(x_i)| < 1, smallest box first."""
    B = 1
    while B <= max_box:
        grid = np.array(np.meshgrid(*[np.arange(-B, B + 1)] * d, indexing="ij")).reshape(d, -1).T
        if len(grid) > 4_000_000:
            break
        vals = np.abs(grid @ np.vander(xs, d, increasing=True).T).max(axis=1)
        nz = np.any(grid != 0, axis=1) & (vals < 1 - 1e-12)
        if nz.any():
            idx = np.flatnonzero(nz)
            best = idx[np.lexsort((*(grid[idx].T[::-1]), vals[idx]))[0]]
            return IntPoly([int(c) for c in grid[best]])
        B *= 2
    raise BudgetExceeded("no base polynomial with |Q0(x_i)| < 1 found")


def certify_dense(Q: IntPoly, targets, epsilon: float, dps: int = 60) -> float:
    """max |Q(x_i) - y_i| over the targeted roots, computed from Q mod min_poly
    (exact) evaluated at roots to ``dps`` digits; raises if >= epsilon."""
    worst = 0.0
    for cls, ys in targets:
        items = _normalise_targets(cls, ys)
        if not items:
            continue
        _, r = poly_divmod(Q, cls.min_poly)
        roots = _mp_roots(cls.min_poly, dps)
        with mpmath.workdps(dps):
            for i, y in items:
                val = mpmath.polyval([int(c) for c in r.coeffs[::-1]] or [0], roots[i])
                worst = max(worst, float(abs(val - mpmath.mpf(y))))
    if not worst < epsilon:
        raise AssertionError(f"certified error {worst} >= {epsilon}")
    return worst


def _dense_single(cls: ConjugateClass, items, epsilon: float, max_k: int = 400) -> IntPoly:
    xs = np.array([cls.roots[i] for i, _ in items])
    ys = np.array([y for _, y in items], float)
    c = round(float(ys[0]))
    if np.all(np.abs(ys - c) < epsilon):
        return IntPoly([c])
    Q0 = _base_q0(xs, cls.degree)
    q0v = accurate_eval(Q0, xs)
    targets = [(cls, dict(items))]
    for k in range(1, max_k + 1):
        w = ys / q0v ** k
        P = IntPoly([math.floor(v) for v in _lagrange_coeffs(xs, w)])
        Q = Q0 ** k * P
        try:
            certify_dense(Q, targets, epsilon)
            return Q
        except AssertionError:
            continue
    raise BudgetExceeded(f"no k <= {max_k} met epsilon = {epsilon}")


def dense_interpolate(targets, epsilon: float) -> IntPoly:
    """Q in Z[T] with |Q(x_i) - y_i| < epsilon at the targeted class roots.

    ``targets`` is a list of ``(ConjugateClass, ys)`` with ``ys`` a dict
    {root index: value} or a sequence aligned with ``cls.roots`` (None for
    untargeted roots).  Every class must leave some conjugate untargeted.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    norm = []
    for cls, ys in targets:
        items = _normalise_targets(cls, ys)
        if len(items) >= cls.degree:
            raise HypothesisViolated(f"all conjugates of {cls.min_poly} are targeted")
        if items:
            norm.append((cls, items))
    if not norm:
        return IntPoly([])
    if len(norm) == 1:
        cls, items = norm[0]
        return _dense_single(cls, items, epsilon)
    Q = IntPoly([])
    for j, (cls, items) in enumerate(norm):
        Qp = IntPoly([1])
        for i, (other, _) in enumerate(norm):
            if i != j:
                Qp = Qp * other.min_poly
        qpv = accurate_eval(Qp, np.array([cls.roots[i] for i, _ in items]))
        scaled = [(i, y / qv) for (i, y), qv in zip(items, qpv)]
        eps_j = epsilon / max(1.0, float(np.abs(qpv).max()))
        Q = Q + Qp * _dense_single(cls, scaled, eps_j)
    certify_dense(Q, [(c, dict(it)) for c, it in norm], epsilon)
    return Q


def j0_reduction(f: TargetFunction, K: CompactSet, j0: list | None = None, extra: list | None = None,
                 epsilon: float = 1e-3, n_samples: int = 2001) -> TargetFunction:
    """f - Q P as a sample table, with P the product of the J0 minimal
    polynomials and Q from ``dense_interpolate`` so that the result is within
    epsilon of zero at the ``extra`` points (pairs (class, root index)).

    With no extra points f is returned unchanged.  f must vanish on J0.
    """
    extra = extra or []
    if not extra:
        return f
    P = IntPoly([1])
    for cls in j0 or []:
        P = P * cls.min_poly
    normP = max(sup_norm(P, K).value, 1.0)
    by_class: dict = {}
    for cls, i in extra:
        x = cls.roots[i]
        Px = float(accurate_eval(P, np.array([x]))[0])
        if Px == 0:
            raise HypothesisViolated(f"extra point {x} is a zero of the J0 product")
        by_class.setdefault(cls.min_poly.coeffs, (cls, {}))[1][i] = f(x, K) / Px
    Q = dense_interpolate(list(by_class.values()), epsilon / normP)
    QP = Q * P
    pts = set(K.grid(n_samples, kind="uniform").tolist())
    for cls in j0 or []:
        pts.update(r for r in cls.roots if K.contains(r, 1e-9))
    for cls, i in extra:
        pts.add(cls.roots[i])
    xs = np.array(sorted(pts))
    return TargetFunction.from_samples(xs, f(xs, K) - accurate_eval(QP, xs), f.lipschitz)
