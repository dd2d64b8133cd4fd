import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zcap.chebyshev import chebyshev, chebyshev_closed_form, classical_chebyshev
from zcap.core import CompactSet, RealPoly, parse_set, sup_norm
from zcap.errors import DegenerateInterval

F = Fraction


@pytest.mark.parametrize("a,b,n,coeffs,norm", [
    (-1, 1, 2, [F(-1, 2), 0, 1], F(1, 2)),
    (0, 1, 1, [F(-1, 2), 1], F(1, 2)),
    (F(-1, 2), F(1, 2), 2, [F(-1, 8), 0, 1], F(1, 8)),
    (0, 1, 2, [F(1, 8), -1, 1], F(1, 8)),
])
def test_closed_form_exact(a, b, n, coeffs, norm):
    res = chebyshev_closed_form(a, b, n)
    assert list(res.poly.coeffs) == coeffs
    assert res.norm == pytest.approx(float(norm), abs=1e-15)
    assert res.method == "closed_form"


def test_closed_form_degenerate():
    with pytest.raises(DegenerateInterval):
        chebyshev_closed_form(1, 1, 3)
    with pytest.raises(DegenerateInterval):
        chebyshev_closed_form(2, 1, 3)


def test_classical():
    assert classical_chebyshev(3) == [0, -3, 0, 4]
    assert classical_chebyshev(4) == [1, 0, -8, 0, 8]


def test_t3_on_unit_interval():
    res = chebyshev(CompactSet.interval(-1, 1), 3)
    assert [float(c) for c in res.poly.coeffs] == pytest.approx([0, -0.75, 0, 1], abs=1e-12)
    assert res.norm == pytest.approx(0.25, abs=1e-12)


@pytest.mark.parametrize("n", range(1, 8))
def test_equioscillation_single_interval(n):
    K = CompactSet.interval(F(-3, 10), F(17, 10))
    res = chebyshev(K, n)
    pts = res.alternation_points
    assert len(pts) == n + 1
    vals = [float(res.poly(x)) for x in pts]
    assert all(abs(abs(v) - res.norm) <= 1e-7 for v in vals)
    assert all(v * w < 0 for v, w in zip(vals, vals[1:]))


@given(st.integers(-30, 30), st.integers(1, 40), st.integers(1, 10))
def test_exchange_matches_closed_form(a10, w10, n):
    a, b = a10 / 10, (a10 + w10) / 10
    K = CompactSet.interval(a, b)
    ex = chebyshev(K, n, method="exchange")
    cf = chebyshev_closed_form(a, b, n)
    scale = max(1.0, abs(a), abs(b)) ** n
    assert np.allclose(ex.poly.float_coeffs(), cf.poly.float_coeffs(), atol=1e-7 * scale)
    # the solver's own norm (Chebyshev basis) is tight; monomial float
    # coefficients cost up to ~1e-7 relative through cancellation
    assert ex.extra["norm_cheb_basis"] == pytest.approx(cf.norm, rel=1e-8)
    assert ex.norm == pytest.approx(cf.norm, rel=1e-6, abs=1e-9)


def _grid_oracle():
    """T^2 + p T - q on [-1,-1/2] U [1/2,1] by brute force over (p, q)."""
    K = parse_set("[-1,-1/2] U [1/2,1]")
    xs = K.grid(400)
    best = (np.inf, None)
    for p, q in itertools.product(np.linspace(-0.2, 0.2, 41), np.linspace(0.4, 0.8, 401)):
        v = np.abs(xs ** 2 + p * xs - q).max()
        if v < best[0]:
            best = (v, (p, q))
    return best


def test_union_example_against_grid_oracle():
    K = parse_set("[-1,-1/2] U [1/2,1]")
    res = chebyshev(K, 2)
    assert res.method == "exchange"
    assert [float(c) for c in res.poly.coeffs] == pytest.approx([-0.625, 0, 1], abs=1e-7)
    assert res.norm == pytest.approx(0.375, abs=1e-9)
    v, (p, q) = _grid_oracle()
    assert v == pytest.approx(0.375, abs=1e-3)
    assert abs(p) < 1e-9 and q == pytest.approx(0.625, abs=1e-3)


@pytest.mark.parametrize("text", ["[-1,1]", "[0,1] U [2,3]", "[-2,-1] U [0,1/2] U [1,2]"])
def test_norm_matches_sup_norm_and_monic(text):
    K = parse_set(text)
    for n in (1, 3, 5):
        res = chebyshev(K, n)
        assert res.poly.degree == n and res.poly.is_monic()
        assert res.norm == pytest.approx(sup_norm(res.poly, K).value, abs=1e-9)


@pytest.mark.parametrize("text,n", [("[-1,1]", 4), ("[0,1] U [2,3]", 3), ("[-1,-1/2] U [1/2,1]", 4)])
def test_minimax_dominance(text, n):
    K = parse_set(text)
    best = chebyshev(K, n).norm
    rng = np.random.default_rng(1)
    for _ in range(200):
        c = list(rng.normal(0, 1, n)) + [1.0]
        assert sup_norm(RealPoly(c), K).value >= best - 1e-9


@pytest.mark.parametrize("text", ["[-1,1]", "[0,1] U [2,3]", "[-1,-1/2] U [1/2,1]"])
def test_submultiplicative(text):
    K = parse_set(text)
    norms = {n: chebyshev(K, n).norm for n in range(1, 7)}
    for m in range(1, 4):
        for n in range(1, 4):
            assert norms[m + n] <= norms[m] * norms[n] + 1e-9


@pytest.mark.parametrize("a,b", [(-1, 1), (0, 3), (F(1, 4), F(1, 2))])
def test_capacity_lower_bound(a, b):
    cap = float(F(b) - F(a)) / 4
    K = CompactSet.interval(a, b)
    for n in range(1, 12):
        assert chebyshev(K, n, method="exchange").norm >= cap ** n - 1e-9


def test_bad_arguments():
    K = parse_set("[0,1] U [2,3]")
    with pytest.raises(ValueError):
        chebyshev(K, 0)
    with pytest.raises(ValueError):
        chebyshev(K, 2, method="closed_form")
