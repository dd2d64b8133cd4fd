"""Acceptance criteria as plain functions, shared by ``zcap selftest`` and pytest.

Each check returns ``(passed, detail)``; ``run`` adds timing and compares it
with the criterion's time limit.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .approximate import TargetFunction, approximate, certify_dense, dense_interpolate, is_interpolable
from .capacity import FeketeConfig, capacity, fekete_points
from .chebyshev import chebyshev, chebyshev_closed_form, classical_chebyshev
from .config import DEFAULT, Config
from .core import CompactSet, IntPoly, RealPoly, parse_set, sup_norm
from .errors import CapacityAtLeastOne, NotInterpolable
from .kernel import class_from_poly, enumerate_kernel, symmetric_k_bound, verify_kernel_point
from .smallnorm import construct_small_norm, exhaustive_small_norm

__all__ = ["Criterion", "CriterionResult", "CRITERIA", "run", "run_all"]


@dataclass(frozen=True)
class Criterion:
    id: int
    name: str
    limit: float
    check: Callable


@dataclass(frozen=True)
class CriterionResult:
    id: int
    name: str
    passed: bool
    seconds: float
    limit: float
    detail: str

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.id}. {self.name} ({self.seconds:.2f}s / {self.limit:g}s): {self.detail}"

    def to_dict(self) -> dict:
        return {"id": self.id, "name": self.name, "passed": self.passed, "seconds": round(self.seconds, 3),
                "limit": self.limit, "detail": self.detail}


def _c1(cfg):
    K = CompactSet.interval(-1, 1)
    worst_c = worst_n = 0.0
    for n in range(1, 11):
        res = chebyshev(K, n, cfg)
        ref = [Fraction(c, 2 ** (n - 1)) for c in classical_chebyshev(n)]
        worst_c = max(worst_c, max(abs(float(a - b)) for a, b in zip(res.poly.coeffs, ref)))
        worst_n = max(worst_n, abs(res.norm - 2.0 ** (1 - n)))
    return worst_c <= 1e-7 and worst_n <= 1e-9, f"max coeff err {worst_c:.2e}, max norm err {worst_n:.2e}"


def _c2(cfg):
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(20):
        a, b = np.sort(rng.uniform(-3, 3, 2))
        K = CompactSet.interval(float(a), float(b))
        for n in range(1, 7):
            ex = chebyshev(K, n, cfg, method="exchange")
            cf = chebyshev_closed_form(float(a), float(b), n)
            worst = max(worst, max(abs(float(x) - float(y)) for x, y in zip(ex.poly.coeffs, cf.poly.coeffs)))
    return worst <= 1e-6, f"20 intervals x n=1..6, max coeff diff {worst:.2e}"


def _delta3_bruteforce(n_grid=401):
    x = np.linspace(-1, 1, n_grid)
    best = 0.0
    for i in range(n_grid - 2):
        d1 = x[i + 1:, None] - x[i]
        d2 = x[None, i + 1:] - x[i + 1:, None]
        prod = d1 * np.abs(d2) * (x[None, i + 1:] - x[i])
        prod = np.triu(prod, 1)
        best = max(best, float(prod.max()))
    # delta_3 = (prod over ordered pairs)^(1/6) = (prod over unordered pairs)^(1/3)
    return best ** (1 / 3)


def _c3(cfg):
    ok = True
    parts = []
    for text in ("[0,1]", "[-1,1]", "[-2,2]"):
        K = parse_set(text)
        est = capacity(K, 16, 12, cfg)
        d16 = dict(est.d1_seq)[16]
        target = K.measure / 4
        good = abs(d16 - target) <= 0.02
        d2 = [v for _, v in est.d2_seq]
        mono = all(b <= a * (1 + 1e-12) for a, b in zip(d2, d2[1:]))
        ok &= good and mono
        parts.append(f"{text}: d1_16={d16:.5f} vs {target:g} ({'ok' if good else 'off by %.4f' % abs(d16 - target)}),"
                     f" delta_n monotone={mono}")
    _, d3 = fekete_points(CompactSet.interval(-1, 1), FeketeConfig(3, cfg.multistarts, cfg.ascent_tol, cfg.seed), cfg)
    brute = _delta3_bruteforce()
    good3 = abs(d3 - brute) <= 1e-3 and abs(d3 - 2 ** (1 / 3)) <= 1e-3
    ok &= good3
    parts.append(f"delta_3([-1,1])={d3:.6f}, grid brute force {brute:.6f}")
    return ok, "; ".join(parts)


def _c4(cfg):
    rng = np.random.default_rng(cfg.seed)
    K = CompactSet.interval(-2, 2)
    seen = set()
    worst = math.inf
    while len(seen) < 100:
        a = tuple(int(v) for v in rng.integers(-3, 4, rng.integers(1, 7)))
        b = tuple(int(v) for v in rng.integers(-3, 4, rng.integers(1, 7)))
        P, Q = IntPoly(a), IntPoly(b)
        if P == Q or (P.coeffs, Q.coeffs) in seen:
            continue
        seen.add((P.coeffs, Q.coeffs))
        worst = min(worst, sup_norm(P - Q, K, cfg).value)
    return worst >= 1 - 1e-9, f"min |P - Q| over 100 pairs = {worst:.6f}"


def _c5(cfg):
    ok = True
    parts = []
    for text, delta in (("[-1/2,1/2]", 0.15), ("[0,0.4]", 0.15), ("[-1.2,1.2]", 0.16)):
        K = parse_set(text)
        tr = construct_small_norm(K, delta, cfg)
        oracle = exhaustive_small_norm(K, 4, 3, cfg)
        good = tr.result.is_monic() and tr.norm < 6 * delta < 1 and not tr.check() and oracle is not None
        ok &= good
        parts.append(f"{text}: deg {tr.result.degree} norm {tr.norm:.3g} < {6 * delta:.2f}, oracle {oracle}")
    K = CompactSet.interval(-2, 2)
    try:
        construct_small_norm(K, 0.15, cfg)
        refused = False
    except CapacityAtLeastOne:
        refused = True
    none = exhaustive_small_norm(K, 6, 3, cfg) is None
    ok &= refused and none
    parts.append(f"[-2,2]: construction refused={refused}, oracle NotFound={none}")
    return ok, "; ".join(parts)


def _c6(cfg):
    parts = []
    r1 = enumerate_kernel(CompactSet.interval(-1, 1), 4, cfg)
    ok1 = np.allclose(r1.points, [-1, 0, 1], atol=1e-9) and len(r1.points) == 3
    r2 = enumerate_kernel(CompactSet.interval(Fraction(1, 4), Fraction(1, 2)), 6, cfg)
    ok2 = len(r2.points) == 0
    kb = (symmetric_k_bound(1), symmetric_k_bound(1.9))
    ok3 = kb == (6, 19)
    ver = all(verify_kernel_point(c, CompactSet.interval(-1, 1), 25, cfg) for c in r1.classes)
    parts.append(f"J([-1,1])={[round(p, 9) for p in r1.points]}, J([1/4,1/2])={list(r2.points)}, "
                 f"k-bounds={kb}, verify(25)={ver}")
    return ok1 and ok2 and ok3 and ver, "; ".join(parts)


def _best_box_error(K, target, max_deg=2, bound=3):
    best = math.inf
    for c in itertools.product(range(-bound, bound + 1), repeat=max_deg + 1):
        best = min(best, sup_norm(RealPoly(list(c)) - RealPoly([target]), K, DEFAULT).value)
    return best


def _c7(cfg):
    K = CompactSet.interval(Fraction(1, 4), Fraction(1, 2))
    f = TargetFunction.constant(Fraction(1, 2))
    res = approximate(f, K, 0.2, cfg)
    ref = sup_norm(RealPoly([0, 2, -2]) - RealPoly([Fraction(1, 2)]), K, cfg).value
    oracle = _best_box_error(K, Fraction(1, 2))
    ok = res.achieved_error <= 0.2 and abs(ref - 0.125) < 1e-12 and abs(oracle - 0.125) < 1e-12
    try:
        approximate(f, CompactSet.interval(-1, 1), 0.2, cfg)
        refused = False
    except NotInterpolable:
        refused = True
    return ok and refused, (f"[1/4,1/2]: certified error {res.achieved_error:.4f} (deg {res.poly.degree}), "
                            f"2T-2T^2 error {ref:.4f}, box oracle {oracle:.4f}; [-1,1] f(0)=1/2 -> "
                            f"NotInterpolable={refused}")


def _c8(cfg):
    phi = class_from_poly(IntPoly([-1, -1, 1]))
    top = phi.roots.index(max(phi.roots))
    parts, ok = [], True
    for y, eps in ((0.5, 0.3), (-1.3, 0.25), (0.1, 0.25), (2.7, 0.25)):
        Q = dense_interpolate([(phi, {top: y})], eps)
        err = certify_dense(Q, [(phi, {top: y})], eps)
        ok &= err < eps
        parts.append(f"y={y}: Q={Q}, err {err:.3g}")
    return ok, "; ".join(parts)


def _c9(cfg):
    rng = np.random.default_rng(cfg.seed)
    K = CompactSet.interval(Fraction(-1, 2), Fraction(1, 2))
    kern = enumerate_kernel(K, cfg.max_deg, cfg)
    worst, ok = 0.0, True
    for _ in range(50):
        p = IntPoly([int(v) for v in rng.integers(-2, 3, rng.integers(1, 6))])
        f = TargetFunction.from_poly(p)
        res = approximate(f, K, 1e-6, cfg, kernel=kern)
        interp, _ = is_interpolable(f, kern, cfg.interp_tol, K, cfg)
        worst = max(worst, res.achieved_error)
        ok &= res.achieved_error <= 1e-6 and interp
    return ok, f"50 targets, worst error {worst:.2e}"


CRITERIA = [
    Criterion(1, "chebyshev closed form on [-1,1]", 5, _c1),
    Criterion(2, "chebyshev affine formula vs exchange", 30, _c2),
    Criterion(3, "capacity sequences", 120, _c3),
    Criterion(4, "discreteness at cap = 1", 10, _c4),
    Criterion(5, "smallnorm construction", 120, _c5),
    Criterion(6, "kernel", 120, _c6),
    Criterion(7, "approximation end to end", 60, _c7),
    Criterion(8, "density lemma", 60, _c8),
    Criterion(9, "round trip", 60, _c9),
]


def run(criterion: Criterion, cfg: Config = DEFAULT) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        passed, detail = criterion.check(cfg)
    except Exception as exc:  # noqa: BLE001 - a crash is a failed criterion
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if dt > criterion.limit:
        passed = False
        detail += f" [over time limit {criterion.limit:g}s]"
    return CriterionResult(criterion.id, criterion.name, bool(passed), dt, criterion.limit, detail)


def run_all(filter: str | None = None, cfg: Config = DEFAULT) -> list[CriterionResult]:
    """Run every criterion whose name (or id) contains ``filter``."""
    out = []
    for c in CRITERIA:
        if filter and filter.lower() not in c.name.lower() and filter != str(c.id):
            continue
        out.append(run(c, cfg))
    return out
