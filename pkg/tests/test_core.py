from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zcap.config import Config
from zcap.core import (
    CompactSet,
    IntPoly,
    RealPoly,
    accurate_eval,
    contains,
    eval_exact,
    eval_poly,
    monic_check,
    parse_set,
    poly_divmod,
    sup_norm,
)

small_ints = st.integers(-6, 6)
int_polys = st.lists(small_ints, min_size=0, max_size=7).map(IntPoly)
real_polys = st.lists(st.floats(-3, 3, allow_nan=False), min_size=1, max_size=7).map(RealPoly)


@st.composite
def compacts(draw):
    n = draw(st.integers(1, 3))
    cuts = sorted(draw(st.lists(st.integers(-40, 40), min_size=2 * n, max_size=2 * n, unique=True)))
    return CompactSet(tuple((Fraction(a, 10), Fraction(b, 10)) for a, b in zip(cuts[::2], cuts[1::2])))


# -- compact sets ------------------------------------------------------------


def test_parse_forms():
    K = parse_set("[-1/2, 1/2] U [0.75,1]")
    assert K.intervals == ((Fraction(-1, 2), Fraction(1, 2)), (Fraction(3, 4), Fraction(1)))
    assert K.measure == pytest.approx(1.25)
    assert not K.is_interval
    assert parse_set("[0,1]").is_interval


@pytest.mark.parametrize("text", ["[1,0]", "[0,1] U [0.5,2]", "[1,1]", "0,1", "[a,b]", ""])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_set(text)


def test_unsorted_union_is_sorted_or_rejected():
    try:
        K = parse_set("[2,3] U [0,1]")
    except ValueError:
        return
    assert K.intervals[0][0] < K.intervals[1][0]


@pytest.mark.parametrize("K,x,tol,expected", [
    ("[-1,1]", 1.0, 0.0, True),
    ("[-1,1]", 1.0000001, 1e-6, True),
    ("[1/4,1/2]", 0.0, 0.0, False),
    ("[0,1] U [2,3]", 1.5, 0.0, False),
])
def test_contains(K, x, tol, expected):
    assert contains(parse_set(K), x, tol) is expected


@given(compacts())
def test_compact_invariants(K):
    ivs = K.intervals
    assert all(a <= b for a, b in ivs)
    assert all(b < c for (_, b), (c, _) in zip(ivs, ivs[1:]))
    assert K.measure > 0
    g = K.grid(50)
    assert all(K.contains(x, 1e-12) for x in g)


# -- polynomials ---------------------------------------------------------------


def test_spec_arith_examples():
    T = IntPoly.x()
    assert (T - 1) * (T + 1) == IntPoly([-1, 0, 1])
    assert (T ** 2).compose(T + 1) == IntPoly([1, 2, 1])
    assert not monic_check(IntPoly([1, 0, 2]))
    assert monic_check(IntPoly([5, 1]))


def test_spec_eval_examples():
    assert eval_poly(IntPoly([-2, 0, 1]), 0) == -2
    assert eval_poly(IntPoly([0, 2, -2]), 0.5) == 0.5
    assert eval_exact(IntPoly([0, 2, -2]), Fraction(1, 2)) == Fraction(1, 2)
    assert eval_poly(IntPoly([]), 123.0) == 0


def test_canonical_form():
    assert IntPoly([1, 2, 0, 0]).coeffs == (1, 2)
    assert IntPoly([0, 0]).is_zero
    assert IntPoly([]).degree == -1 or IntPoly([]).degree < 0
    with pytest.raises(ValueError):
        IntPoly([0.5])


def test_big_integers_exact():
    p = IntPoly([3, 1]) ** 60
    assert p.coeffs[0] == 3 ** 60
    assert eval_exact(p, -3) == 0


@given(int_polys, int_polys, int_polys)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == IntPoly([])


@given(int_polys, int_polys, st.integers(-5, 5))
def test_compose_and_derivative(a, b, x):
    assert eval_exact(a.compose(b), x) == eval_exact(a, eval_exact(b, x))
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@given(int_polys, st.lists(small_ints, min_size=1, max_size=4))
def test_divmod_monic(a, tail):
    b = IntPoly(list(tail) + [1])
    q, r = poly_divmod(a, b)
    assert isinstance(q, IntPoly) and isinstance(r, IntPoly)
    assert q * b + r == a
    assert r.degree < b.degree


@given(int_polys, st.fractions(min_value=-3, max_value=3, max_denominator=50))
def test_accurate_eval_matches_exact(p, x):
    got = accurate_eval(p, np.array([float(x)]))[0]
    want = float(eval_exact(p, Fraction(float(x))))
    assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_accurate_eval_cancellation():
    # (T - 1)^20 near 1: naive Horner in expanded form loses everything
    p = IntPoly([-1, 1]) ** 20
    x = 1.001
    assert accurate_eval(p, np.array([x]))[0] == pytest.approx(float(eval_exact(p, Fraction(x))), rel=1e-10)


# -- sup norm ------------------------------------------------------------------


@pytest.mark.parametrize("p,K,value", [
    (RealPoly([0, -0.75, 0, 1]), "[-1,1]", 0.25),
    (RealPoly([-3.5]), "[0,1] U [2,5]", 3.5),
    (RealPoly([Fraction(-1, 8), 0, 1]), "[-1/2,1/2]", 0.125),
])
def test_sup_norm_examples(p, K, value):
    res = sup_norm(p, parse_set(K))
    assert res.value == pytest.approx(value, abs=1e-12)
    assert res.certified_lower <= res.value <= res.certified_upper
    assert parse_set(K).contains(res.witness, 1e-9)


def test_sup_norm_zero():
    K = parse_set("[2,3]")
    res = sup_norm(IntPoly([]), K)
    assert res.value == 0 and res.witness == 2


@given(real_polys, compacts())
def test_sup_norm_square(p, K):
    a = sup_norm(p, K).value
    assert sup_norm(p * p, K).value == pytest.approx(a * a, rel=1e-9, abs=1e-300)


@given(real_polys, compacts(), st.floats(-10, 10, allow_nan=False))
def test_sup_norm_homogeneous(p, K, c):
    a = sup_norm(p, K).value
    assert sup_norm(RealPoly([c]) * p, K).value == pytest.approx(abs(c) * a, rel=1e-12, abs=1e-300)


@given(real_polys, compacts())
def test_sup_norm_dominates_random_and_grid(p, K):
    res = sup_norm(p, K)
    rng = np.random.default_rng(0)
    xs = K.random_points(1000, rng)
    assert np.abs(p(xs)).max() <= res.value * (1 + 1e-12) + 1e-12
    g = K.grid(100_000)
    assert np.abs(accurate_eval(p, g)).max() <= res.value + 1e-9
    assert res.certified_lower <= res.value <= res.certified_upper
    assert abs(p(res.witness)) >= res.certified_lower - 1e-12


# -- config --------------------------------------------------------------------


def test_config_validation_and_file(tmp_path):
    with pytest.raises(ValueError):
        Config(precision=3)
    with pytest.raises(ValueError):
        Config(max_iters=0)
    f = tmp_path / "zcap.cfg"
    f.write_text("# comment\nseed = 7\ndelta = 0.1\nout_format = csv\n")
    cfg = Config.from_file(f)
    assert (cfg.seed, cfg.delta, cfg.out_format) == (7, 0.1, "csv")
    assert cfg.replace(seed=3).seed == 3
    with pytest.raises((ValueError, KeyError)):
        f.write_text("no_such_key = 1\n")
        Config.from_file(f)
