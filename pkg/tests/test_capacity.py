import math

import numpy as np
import pytest

from zcap.capacity import (
    FeketeConfig,
    capacity,
    d1_estimate,
    fekete_points,
    is_subunit_capacity,
    log_vandermonde,
)
from zcap.config import Config
from zcap.core import CompactSet, IntPoly, parse_set, sup_norm


def test_log_vandermonde():
    assert log_vandermonde([0, 1, 3]) == pytest.approx(2 * (math.log(1) + math.log(3) + math.log(2)))


@pytest.mark.parametrize("a,b", [(0, 1), (-1, 1), (-2, 2)])
def test_sequences_on_intervals(a, b):
    K = CompactSet.interval(a, b)
    cap = (b - a) / 4
    est = capacity(K, 12, 8)
    d1 = dict(est.d1_seq)
    d2 = [v for _, v in est.d2_seq]
    # d1_n = cap 2^(1/n) exactly on an interval
    for n, v in d1.items():
        assert v == pytest.approx(cap * 2 ** (1 / n), rel=1e-9)
        assert v >= cap - 1e-6
    assert all(v >= cap - 1e-6 for v in d2)
    assert all(y <= x * (1 + 1e-12) for x, y in zip(d2, d2[1:]))
    lo, hi = est.bracket
    assert lo <= cap + 1e-12 <= hi + 1e-12
    assert est.extrapolated == pytest.approx(cap, rel=1e-9)


def test_fekete_three_points():
    pts, d3 = fekete_points(CompactSet.interval(-1, 1), FeketeConfig(3))
    assert pts == pytest.approx([-1, 0, 1], abs=1e-6)
    assert d3 == pytest.approx(2 ** (1 / 3), abs=1e-9)


def test_fekete_points_in_set_and_deterministic():
    K = parse_set("[-1,-1/2] U [1/2,1]")
    fc = FeketeConfig(7, multistarts=4, seed=3)
    p1, d1 = fekete_points(K, fc)
    p2, d2 = fekete_points(K, fc)
    assert p1 == p2 and d1 == d2
    assert all(K.contains(x, 1e-12) for x in p1)


def test_threads_do_not_change_result():
    K = parse_set("[0,1] U [2,3]")
    fc = FeketeConfig(6, multistarts=4)
    a = fekete_points(K, fc, Config(threads=1))
    b = fekete_points(K, fc, Config(threads=4))
    assert a == b


def test_union_sandwich():
    K = parse_set("[-1,-1/2] U [1/2,1]")
    est = capacity(K, 10, 8)
    # Fekete estimates never fall below the Chebyshev tail beyond tolerance
    assert min(v for _, v in est.d2_seq) >= min(v for _, v in est.d1_seq) - 1e-3
    # cap of [-1,-a] U [a,1] is sqrt(1 - a^2) / 2
    assert est.bracket[0] <= math.sqrt(0.75) / 2 <= est.bracket[1]


def test_discreteness_at_capacity_one():
    rng = np.random.default_rng(5)
    K = CompactSet.interval(-2, 2)
    for _ in range(100):
        P = IntPoly([int(v) for v in rng.integers(-3, 4, 6)])
        Q = IntPoly([int(v) for v in rng.integers(-3, 4, 6)])
        if P != Q:
            assert sup_norm(P - Q, K).value >= 1 - 1e-9


def test_subunit():
    assert is_subunit_capacity(CompactSet.interval(0, 1))
    assert not is_subunit_capacity(CompactSet.interval(-2, 2))
    assert not is_subunit_capacity(CompactSet.interval(0, 5))


def test_bad_arguments():
    with pytest.raises(ValueError):
        FeketeConfig(1)
    with pytest.raises(ValueError):
        d1_estimate(CompactSet.interval(0, 1), 0)
