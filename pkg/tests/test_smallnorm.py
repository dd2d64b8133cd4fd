import itertools
from fractions import Fraction

import pytest

from zcap.core import CompactSet, IntPoly, parse_set, sup_norm
from zcap.errors import CapacityAtLeastOne
from zcap.smallnorm import (
    construct_small_norm,
    enumerate_small_norm,
    exhaustive_small_norm,
    rational_seed,
    small_norm_pool,
)


@pytest.fixture(scope="module")
def traces():
    return {
        "[-1/2,1/2]": construct_small_norm(parse_set("[-1/2,1/2]"), 0.15),
        "[0,0.4]": construct_small_norm(parse_set("[0,0.4]"), 0.15),
        "[-1.2,1.2]": construct_small_norm(parse_set("[-1.2,1.2]"), 0.16),
        "[0,1/4] U [1/2,3/4]": construct_small_norm(parse_set("[0,1/4] U [1/2,3/4]"), 0.15),
    }


@pytest.mark.parametrize("text", ["[-1/2,1/2]", "[0,0.4]", "[-1.2,1.2]", "[0,1/4] U [1/2,3/4]"])
def test_construction_invariants(traces, text):
    tr = traces[text]
    K = parse_set(text)
    assert tr.check() == []
    assert tr.result.is_monic()
    assert tr.norm < 6 * tr.delta < 1
    assert sup_norm(tr.result, K).value == pytest.approx(tr.norm, rel=1e-9)
    a, b = tr.k_pair
    assert 0 <= a < b
    d = tr.to_dict(full=True)
    assert d["method"] == "pigeonhole" and "trace" in d


def test_seed_is_subunit():
    K = parse_set("[0,1/4] U [1/2,3/4]")
    q, alpha = rational_seed(K)
    assert q.is_monic()
    assert sup_norm(q, K).value <= alpha < 1
    assert all(isinstance(c, Fraction) for c in q.coeffs)
    assert sup_norm(q, K).value < 1


@pytest.mark.parametrize("text", ["[-2,2]", "[0,4]", "[-3,1] U [2,3]"])
def test_refuses_capacity_one(text):
    with pytest.raises(CapacityAtLeastOne):
        construct_small_norm(parse_set(text), 0.15)


def test_bad_delta():
    with pytest.raises(ValueError):
        construct_small_norm(parse_set("[0,1]"), 0.2)
    with pytest.raises(ValueError):
        construct_small_norm(parse_set("[0,1]"), 0.0)


@pytest.mark.parametrize("text,expected", [
    ("[-1.2,1.2]", IntPoly([0, -1, 0, 1])),
    ("[0,1]", IntPoly([0, -1, 1])),
])
def test_exhaustive_examples(text, expected):
    assert exhaustive_small_norm(parse_set(text), 4, 3) == expected


def test_exhaustive_none_at_capacity_one():
    assert exhaustive_small_norm(parse_set("[-2,2]"), 6, 3) is None


@pytest.mark.parametrize("text,degree,bound,monic", [
    ("[0,1]", 3, 2, True),
    ("[-1.2,1.2]", 3, 2, True),
    ("[1/4,1/2]", 2, 3, False),
    ("[0,1/4] U [1/2,3/4]", 3, 2, True),
])
def test_enumerate_matches_brute_force(text, degree, bound, monic):
    K = parse_set(text)
    got = set(enumerate_small_norm(K, degree, bound, monic))
    leads = [1] if monic else range(1, bound + 1)
    want = set()
    for lead in leads:
        for c in itertools.product(range(-bound, bound + 1), repeat=degree):
            p = IntPoly(list(c) + [lead])
            if sup_norm(p, K).value < 1:
                want.add(p)
    assert got == want


@pytest.mark.parametrize("text", ["[-1/2,1/2]", "[0,0.4]", "[-1.2,1.2]"])
def test_agreement_with_oracle(traces, text):
    # the oracle finds something on these sets and so does the construction
    assert exhaustive_small_norm(parse_set(text), 4, 3) is not None
    assert traces[text].norm < 1


def test_restriction_monotone(traces):
    P = traces["[-1/2,1/2]"].result
    big, small = parse_set("[-1/2,1/2]"), parse_set("[0,0.4]")
    assert small.subset_of(big)
    assert sup_norm(P, small).value <= sup_norm(P, big).value + 1e-15


def test_pool_members_are_small():
    K = parse_set("[1/4,1/2]")
    pool = small_norm_pool(K, size=20)
    assert len(pool) == len(set(pool)) > 0
    assert all(sup_norm(p, K).value < 1 for p in pool)
    assert small_norm_pool(parse_set("[-2,2]"), size=5) == []
