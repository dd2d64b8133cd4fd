import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zcap.core import CompactSet, IntPoly, parse_set
from zcap.errors import CapacityAtLeastOne, HypothesisViolated, OutOfRange
from zcap.kernel import (
    CandidatePoint,
    ConjugateClass,
    candidate_points,
    class_from_poly,
    count_roots,
    enumerate_kernel,
    is_irreducible,
    symmetric_interval_candidates,
    symmetric_k_bound,
    totally_real_candidates,
    verify_kernel_point,
)


def _numpy_real_roots(p):
    r = np.roots([float(c) for c in p.coeffs[::-1]])
    return np.sort(r[np.abs(r.imag) < 1e-7].real)


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=5))
def test_sturm_counts_product_of_linear_factors(roots):
    # exact real roots at integers and half-integers keep numpy honest
    p = IntPoly([1])
    for r in roots:
        p = p * IntPoly([-r, 1])
    assert count_roots(p) == len(set(roots))
    assert count_roots(p, -0.5, 0.5) == (0 in roots)


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=5))
def test_sturm_matches_numpy_squarefree(c):
    p = IntPoly(list(c) + [1])
    if p.degree < 1:
        return
    q = IntPoly(p.coeffs)
    import sympy

    T = sympy.Symbol("T")
    if sympy.discriminant(sympy.Poly(list(reversed(q.coeffs)), T)) == 0:
        return
    r = _numpy_real_roots(q)
    if len(r) and np.min(np.abs(np.subtract.outer(r, [-1.0, 1.0]))) < 1e-6:
        return
    assert count_roots(q) == len(r)
    assert count_roots(q, -1, 1) == int(np.sum((r >= -1) & (r <= 1)))


@pytest.mark.parametrize("coeffs,expected", [
    ([-2, 0, 1], True),
    ([-1, 0, 1], False),
    ([1, 1, 1], True),
    ([-1, -1, 1], True),
    ([0, 0, 1], False),
    ([1, -3, 0, 1], True),
    ([4, 0, -5, 0, 1], False),
])
def test_irreducible(coeffs, expected):
    assert is_irreducible(IntPoly(coeffs)) is expected


def test_conjugate_class_validation():
    with pytest.raises(HypothesisViolated):
        ConjugateClass(IntPoly([-1, 0, 2]), (-0.7, 0.7), 2)
    with pytest.raises(ValueError):
        class_from_poly(IntPoly([1, 0, 1]))
    c = class_from_poly(IntPoly([-1, -1, 1]))
    assert c.roots == pytest.approx(sorted([(1 - 5 ** 0.5) / 2, (1 + 5 ** 0.5) / 2]))
    assert c.in_set(CompactSet.interval(-1, 2), 0)
    assert not c.in_set(CompactSet.interval(0, 2), 0)


def test_candidate_point_coprime():
    with pytest.raises(ValueError):
        CandidatePoint(2, 4, 0.0)


@pytest.mark.parametrize("a,k", [(1, 6), (1.9, 19), (0.5, 4), (1.5, 8)])
def test_symmetric_k_bound(a, k):
    assert symmetric_k_bound(a) == k


@pytest.mark.parametrize("a", [0, 2, -1, 2.5])
def test_symmetric_k_bound_range(a):
    with pytest.raises(OutOfRange):
        symmetric_k_bound(a)


def test_candidate_points_and_classes():
    pts = candidate_points(1.5)
    assert all(abs(cp.value - 2 * math.cos(2 * math.pi * cp.j / cp.k)) < 1e-12 for cp in pts)
    assert max(cp.k for cp in pts) == symmetric_k_bound(1.5)
    # candidates are unfiltered; the classes are the ones lying inside [-a, a]
    for c in symmetric_interval_candidates(1.5):
        assert all(abs(r) <= 1.5 + 1e-9 for r in c.roots)


def test_kernel_examples():
    r = enumerate_kernel(CompactSet.interval(-1, 1), 4)
    assert r.points == pytest.approx((-1, 0, 1), abs=1e-9)
    assert r.complete
    assert enumerate_kernel(parse_set("[1/4,1/2]"), 6).points == ()
    with pytest.raises(CapacityAtLeastOne):
        enumerate_kernel(CompactSet.interval(-2, 2), 4)


@pytest.mark.parametrize("a,deg", [(1.5, 6), (1.9, 4)])
def test_symmetric_consistency(a, deg):
    K = CompactSet.interval(-a, a)
    r = enumerate_kernel(K, deg)
    cand = [c for c in symmetric_interval_candidates(a) if c.degree <= deg]
    want = sorted(x for c in cand for x in c.roots)
    assert np.allclose(r.points, want, atol=1e-7)
    assert {c.min_poly for c in r.classes} == {c.min_poly for c in cand}


def test_every_class_verifies():
    for text in ("[-1,1]", "[-1.5,1.5]"):
        K = parse_set(text)
        r = enumerate_kernel(K, 6 if text == "[-1.5,1.5]" else 4)
        assert all(verify_kernel_point(c, K, 25) for c in r.classes)


def test_verify_rejects_non_kernel_class():
    K = CompactSet.interval(-1, 1)
    assert not verify_kernel_point(class_from_poly(IntPoly([-1, 1, 1])), K, 25)
    assert not verify_kernel_point(class_from_poly(IntPoly([-2, 0, 1])), K, 25)
    with pytest.raises(TypeError):
        verify_kernel_point(IntPoly([0, 1]), K)


def test_kernel_finite_by_witness():
    K = CompactSet.interval(-1, 1)
    r = enumerate_kernel(K, 4)
    assert r.witness is not None
    assert len(r.points) <= r.witness.degree


def test_monotone_in_set():
    small = enumerate_kernel(CompactSet.interval(-1, 1), 4)
    big = enumerate_kernel(CompactSet.interval(-1.5, 1.5), 4)
    assert set(np.round(small.points, 9)) <= set(np.round(big.points, 9))


@pytest.mark.parametrize("lo,hi,d", [(-1.5, 1.5, 2), (-1.2, 1.8, 3), (0, 3, 2)])
def test_totally_real_candidates_brute_force(lo, hi, d):
    got = {p.coeffs for p in totally_real_candidates(lo, hi, d)}
    B = [math.comb(d, i) * max(abs(lo), abs(hi)) ** (d - i) for i in range(d)]
    want = set()
    for c in itertools.product(*[range(-math.ceil(b), math.ceil(b) + 1) for b in B]):
        p = IntPoly(list(c) + [1])
        r = _numpy_real_roots(p)
        if count_roots(p, lo, hi) == d:
            want.add(p.coeffs)
    # every polynomial with all roots in [lo, hi] is produced
    assert want <= got
