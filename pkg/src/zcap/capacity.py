"""Capacity (transfinite diameter) estimates for compact sets.

Two routes are computed side by side: ``|T_n(K)|_K^(1/n)`` from the
Chebyshev polynomials, and the normalised maximal product of pairwise
distances ``delta_n`` from (numerically optimised) Fekete points.  Both
sequences approach cap(K) from above.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .chebyshev import chebyshev
from .config import DEFAULT, Config
from .core import CompactSet

__all__ = [
    "FeketeConfig",
    "CapacityEstimate",
    "d1_estimate",
    "fekete_points",
    "log_vandermonde",
    "capacity",
    "is_subunit_capacity",
]


@dataclass(frozen=True)
class FeketeConfig:
    n: int
    multistarts: int = DEFAULT.multistarts
    ascent_tol: float = DEFAULT.ascent_tol
    seed: int = DEFAULT.seed
    max_sweeps: int = 200

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("Fekete problem needs n >= 2")
        if self.multistarts < 1:
            raise ValueError("multistarts must be >= 1")


@dataclass(frozen=True)
class CapacityEstimate:
    d1_seq: tuple
    d2_seq: tuple
    alpha_seq: tuple
    best_estimate: float
    bracket: tuple
    extrapolated: float = math.nan
    fekete_points: dict = field(default_factory=dict, compare=False)

    def rows(self) -> list[dict]:
        """One row per n with columns n, d1, d2, alpha_n (missing -> None)."""
        d1 = dict(self.d1_seq)
        d2 = dict(self.d2_seq)
        al = dict(self.alpha_seq)
        ns = sorted(set(d1) | set(d2))
        return [{"n": n, "d1": d1.get(n), "d2": d2.get(n), "alpha_n": al.get(n)} for n in ns]

    def to_dict(self) -> dict:
        return {
            "rows": self.rows(),
            "best_estimate": self.best_estimate,
            "bracket": list(self.bracket),
            "extrapolated": self.extrapolated,
        }


def d1_estimate(K: CompactSet, n_max: int, cfg: Config = DEFAULT) -> list:
    """[(n, |T_n(K)|_K^(1/n)) for n = 1..n_max]."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return [(n, chebyshev(K, n, cfg).norm ** (1.0 / n)) for n in range(1, n_max + 1)]


def log_vandermonde(x) -> float:
    """Sum over ordered pairs i != j of log|x_i - x_j|."""
    x = np.asarray(x, dtype=float)
    d = np.abs(x[:, None] - x[None, :])
    iu = np.triu_indices(len(x), 1)
    with np.errstate(divide="ignore"):
        return 2.0 * float(np.log(d[iu]).sum())


def _stratified_start(K: CompactSet, n: int, rng: np.random.Generator) -> np.ndarray:
    ivs = np.array(K.float_intervals)
    cum = np.concatenate([[0.0], np.cumsum(ivs[:, 1] - ivs[:, 0])])
    total = cum[-1]
    s = (np.arange(n) + rng.random(n)) / n * total
    k = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(ivs) - 1)
    return np.sort(ivs[k, 0] + (s - cum[k]))


def _segments(K, others):
    """Pieces of K cut at the other points (closed at endpoints of K)."""
    segs = []
    for a, b in K.float_intervals:
        cuts = others[(others > a) & (others < b)]
        edges = np.concatenate([[a], cuts, [b]])
        for lo, hi in zip(edges[:-1], edges[1:]):
            if hi > lo:
                segs.append((lo, hi))
    return np.array(segs)


def _coord_objective(y, others):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(y[:, None] - others[None, :])).sum(axis=1)


def _coord_max(K, others, tol):
    """Maximise sum_j log|y - x_j| over y in K by golden section per piece.

    Each piece between consecutive cut points is a region where the
    objective is concave, so golden section finds the piece maximum.
    """
    segs = _segments(K, others)
    lo, hi = segs[:, 0].copy(), segs[:, 1].copy()
    g = (math.sqrt(5) - 1) / 2
    c = hi - g * (hi - lo)
    d = lo + g * (hi - lo)
    fc, fd = _coord_objective(c, others), _coord_objective(d, others)
    floor = np.maximum(tol * (hi - lo), 8 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi)))
    for _ in range(200):
        if not np.any(hi - lo > floor):
            break
        left = fc >= fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        c_new = np.where(left, hi - g * (hi - lo), d)
        d_new = np.where(left, c, lo + g * (hi - lo))
        fc_new = np.where(left, _coord_objective(c_new, others), fd)
        fd_new = np.where(left, fc, _coord_objective(d_new, others))
        c, d, fc, fd = c_new, d_new, fc_new, fd_new
    # endpoints of K are admissible too (the piece objective may peak there)
    cand = np.concatenate([c, d, segs[:, 0], segs[:, 1]])
    vals = _coord_objective(cand, others)
    k = int(np.argmax(vals))
    return float(cand[k]), float(vals[k])


def _newton_polish(K: CompactSet, x: np.ndarray, tol: float, max_iter: int = 200) -> np.ndarray:
    """Projected Newton ascent with every point confined to its interval of K.

    With the interval assignment fixed the objective is concave, so this
    converges quadratically where plain coordinate sweeps crawl.
    """
    ivs = np.array(K.float_intervals)
    which = np.array([int(np.argmin(np.maximum(ivs[:, 0] - v, 0) + np.maximum(v - ivs[:, 1], 0)))
                      for v in x])
    lo, hi = ivs[which, 0], ivs[which, 1]
    x = np.clip(x, lo, hi)
    obj = log_vandermonde(x)
    n = len(x)
    for _ in range(max_iter):
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, np.inf)
        g = 2.0 * (1.0 / diff).sum(axis=1)
        H = 2.0 / diff ** 2
        np.fill_diagonal(H, 0.0)
        H = H - np.diag(H.sum(axis=1))
        active = ((x <= lo) & (g < 0)) | ((x >= hi) & (g > 0))
        free = ~active
        if not free.any():
            break
        Hf = H[np.ix_(free, free)]
        mu = 1e-12 * np.abs(np.diag(Hf)).max()
        step = np.zeros(n)
        step[free] = np.linalg.solve(Hf - mu * np.eye(free.sum()), -g[free])
        t, improved = 1.0, False
        while t > 1e-12:
            xn = np.clip(x + t * step, lo, hi)
            if np.all(np.diff(xn) > 0):
                on = log_vandermonde(xn)
                if on >= obj:
                    improved = True
                    break
            t *= 0.5
        if not improved:
            break
        gain = on - obj
        x, obj = xn, on
        if gain <= tol * max(1.0, abs(obj)):
            break
    return x


def _sweep(K, x):
    for i in range(len(x)):
        others = np.delete(x, i)
        x[i], _ = _coord_max(K, others, 1e-13)
    return np.sort(x)


def _ascent(K: CompactSet, x0: np.ndarray, fcfg: FeketeConfig):
    x = np.sort(x0.copy())
    obj = log_vandermonde(x)
    for _ in range(fcfg.max_sweeps):
        prev = obj
        x = _sweep(K, x)
        x = _newton_polish(K, x, fcfg.ascent_tol)
        obj = log_vandermonde(x)
        if obj - prev <= fcfg.ascent_tol * max(1.0, abs(obj)):
            break
    return np.sort(x), obj


def fekete_points(K: CompactSet, fcfg: FeketeConfig, cfg: Config = DEFAULT):
    """Approximate Fekete points of K and delta_n.

    Cyclic coordinate ascent (golden section on each piece of K between the
    other points) alternated with a projected Newton polish, from
    ``multistarts`` stratified random starts;
    the best start wins (ties: lexicographically smallest point vector).
    Returns ``(points, delta_n)`` with
    ``delta_n = prod_{i != j} |x_i - x_j| ^ (1 / (n (n - 1)))``.
    """
    n = fcfg.n
    rng = np.random.default_rng(fcfg.seed)
    starts = [_stratified_start(K, n, rng) for _ in range(fcfg.multistarts)]
    if cfg.threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            runs = list(pool.map(lambda s: _ascent(K, s, fcfg), starts))
    else:
        runs = [_ascent(K, s, fcfg) for s in starts]
    best_obj = max(obj for _, obj in runs)
    tied = [tuple(x) for x, obj in runs if obj >= best_obj - 1e-12 * max(1.0, abs(best_obj))]
    pts = min(tied)
    delta = math.exp(log_vandermonde(pts) / (n * (n - 1)))
    return [float(v) for v in pts], delta


def capacity(K: CompactSet, n_max: int, fekete_n: int | None = None,
             cfg: Config = DEFAULT) -> CapacityEstimate:
    """Both capacity sequences, the best estimate and a bracket.

    ``best_estimate`` is the Chebyshev value at ``n_max``.  The bracket's
    lower end is Polya's bound measure(K)/4; the upper end is the smallest
    value seen in either sequence (every term of both is >= cap(K)).
    ``extrapolated`` fits log d1_n = a + b/n through n_max // 2 and n_max.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    fekete_n = n_max if fekete_n is None else fekete_n
    d1 = d1_estimate(K, n_max, cfg)
    alpha = [(n, math.log(v)) for n, v in d1]
    d2, pts = [], {}
    for n in range(2, fekete_n + 1):
        fc = FeketeConfig(n=n, multistarts=cfg.multistarts, ascent_tol=cfg.ascent_tol, seed=cfg.seed)
        p, delta = fekete_points(K, fc, cfg)
        d2.append((n, delta))
        pts[n] = p
    upper = min([v for _, v in d1] + [v for _, v in d2])
    lower = K.measure / 4
    # n_max and n_max // 2 rather than two consecutive terms: for unions the
    # Chebyshev norms oscillate with the parity (or period) of n
    (n1, a1), (n2, a2) = alpha[max(n_max // 2, 1) - 1], alpha[-1]
    extrap = math.exp((n2 * a2 - n1 * a1) / (n2 - n1))
    return CapacityEstimate(tuple(d1), tuple(d2), tuple(alpha), d1[-1][1], (lower, upper), extrap, pts)


def is_subunit_capacity(K: CompactSet, cfg: Config = DEFAULT) -> bool:
    """True iff some monic Chebyshev polynomial of degree <= n_cap has norm < 1.

    Conservative: a set whose capacity is below 1 by a hair may need a degree
    above ``cfg.n_cap`` and is then reported as False.
    """
    if K.measure / 4 >= 1:
        return False
    for n in range(1, cfg.n_cap + 1):
        if chebyshev(K, n, cfg).norm < 1:
            return True
    return False
