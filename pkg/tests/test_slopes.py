import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isharp.slopes import (
    INFINITY,
    Slope,
    SlopeError,
    Triad,
    convergents,
    eval_cf,
    format_cf,
    neg_cf,
    parse_cf,
    parse_slope,
    reduce,
    triad,
)


def test_reduce_basic():
    assert reduce(10, 4) == Slope(5, 2)
    assert reduce(3, -1) == Slope(-3, 1)
    assert reduce(0, 7) == Slope(0, 1)
    assert reduce(3, 0) == INFINITY


def test_reduce_rejects_bad_pairs():
    with pytest.raises(SlopeError):
        reduce(0, 0)
    with pytest.raises(SlopeError):
        reduce(-2, 0)  # -1/0 is not the canonical infinite slope
    with pytest.raises(SlopeError):
        Slope(4, 2)  # unreduced pair rejected by the constructor


def test_slope_parse_print_roundtrip():
    for text in ["5/2", "-3/1", "0/1", "inf", "7/13"]:
        assert str(parse_slope(text)) == text
    assert parse_slope("-7") == Slope(-7, 1)
    assert parse_slope("10/4") == Slope(5, 2)
    with pytest.raises(SlopeError):
        parse_slope("x/y")


def test_neg_cf_known_values():
    assert neg_cf(Slope(1, 3)) == [1, 2, 2]
    assert neg_cf(Slope(-1, 3)) == [0, 3]
    assert neg_cf(Slope(7, 1)) == [7]


def test_neg_cf_of_one_over_n_and_minus_one_over_n():
    # 1/n = [1, 2, ..., 2] of total length n; -1/n = [0, n]
    for n in range(2, 40):
        assert neg_cf(Slope(1, n)) == [1] + [2] * (n - 1)
        assert neg_cf(Slope(-1, n)) == [0, n]


def test_eval_cf_known_values():
    assert eval_cf([18, 2]) == Slope(35, 2)  # 18 - 1/2
    assert eval_cf([3, 2]) == Slope(5, 2)  # 3 - 1/2
    for k in (-4, 0, 9):
        assert eval_cf([k]) == Slope(k, 1)
    with pytest.raises(SlopeError):
        eval_cf([3, 1])  # tail coefficients must be >= 2
    with pytest.raises(SlopeError):
        eval_cf([])


def test_convergents_known_values():
    assert convergents([1, 2, 2]) == [(1, 0), (1, 1), (1, 2), (1, 3)]
    assert convergents([0, 3]) == [(1, 0), (0, 1), (-1, 3)]
    assert convergents([5]) == [(1, 0), (5, 1)]


def test_cf_format_parse():
    assert format_cf([1, 2, 2]) == "[1,2,2]"
    assert parse_cf("[0,3]") == [0, 3]
    with pytest.raises(SlopeError):
        parse_cf("[3,1]")


def test_triad_known_values():
    t = triad(Slope(5, 2))
    assert (t.ab, t.cd, t.ef) == (Slope(2, 1), Slope(3, 1), INFINITY)
    t = triad(Slope(1, 3))
    assert (t.ab, t.cd, t.ef) == (Slope(0, 1), Slope(1, 2), Slope(1, 1))
    t = triad(Slope(-1, 2))
    assert (t.ab, t.cd, t.ef) == (Slope(-1, 1), Slope(0, 1), INFINITY)


def test_triad_rejects_integers_and_infinity():
    with pytest.raises(SlopeError):
        triad(Slope(4, 1))
    with pytest.raises(SlopeError):
        triad(INFINITY)


def check_triad_identities(s: Slope, t: Triad) -> None:
    a, b = t.ab.p, t.ab.q
    c, d = t.cd.p, t.cd.q
    e, f = t.ef.p, t.ef.q
    p, q = s.p, s.q
    assert (p, q) == (a + c, b + d)
    assert b > 0 and d > 0 and f >= 0
    assert f > 0 or e == 1
    assert b * c - a * d == 1
    assert p * b - q * a == 1
    assert q * c - p * d == 1
    if t.sum_case == "ab=cd+ef":
        assert (a, b) == (c + e, d + f)
    else:
        assert t.sum_case == "cd=ab+ef"
        assert (c, d) == (a + e, b + f)
    lo, hi = s.floor(), s.ceil()
    assert lo <= t.ab.as_fraction() < s.as_fraction() < t.cd.as_fraction() <= hi
    if not t.ef.is_infinite:
        assert lo <= t.ef.as_fraction() <= hi
    else:
        assert b == d == 1


slopes_strategy = st.tuples(
    st.integers(min_value=-10**4, max_value=10**4),
    st.integers(min_value=2, max_value=10**4),
).filter(lambda pq: math.gcd(abs(pq[0]), pq[1]) == 1)


@given(slopes_strategy)
@settings(max_examples=400)
def test_triad_identities_random(pq):
    s = Slope(*pq)
    check_triad_identities(s, triad(s))


@given(slopes_strategy)
@settings(max_examples=400)
def test_cf_roundtrip_random(pq):
    s = Slope(*pq)
    cf = neg_cf(s)
    assert all(a >= 2 for a in cf[1:])
    assert eval_cf(cf) == s


@given(st.integers(min_value=-10**4, max_value=10**4))
def test_cf_roundtrip_integers(n):
    s = Slope(n, 1)
    assert neg_cf(s) == [n]
    assert eval_cf([n]) == s


@given(slopes_strategy)
@settings(max_examples=400)
def test_convergent_invariants_random(pq):
    s = Slope(*pq)
    pairs = convergents(neg_cf(s))
    for i in range(1, len(pairs)):
        (p_prev, q_prev), (p_i, q_i) = pairs[i - 1], pairs[i]
        assert q_i * p_prev - p_i * q_prev == 1
        if i >= 2:
            assert q_i > q_prev > 0
    assert reduce(*pairs[-1]) == s
