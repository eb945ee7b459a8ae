import pytest
from hypothesis import given, settings, strategies as st

from wallseries.cyclotomic import CyclotomicInt
from wallseries.series import (TruncatedSeries, eta_factor, euler_product_coeffs, is_integer_series, single,
                               substitute_root_of_unity, theta_series, z0_pair)

from oracles import partitions

NAMES = ("x", "y")


@st.composite
def series2(draw, N=6):
    terms = {}
    for _ in range(draw(st.integers(0, 8))):
        a = draw(st.integers(0, N))
        b = draw(st.integers(0, N - a))
        terms[(a, b)] = draw(st.integers(-5, 5))
    return TruncatedSeries(NAMES, N, terms)


@settings(max_examples=60)
@given(series2(), series2(), series2())
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a - b) + b == a


@settings(max_examples=60)
@given(series2())
def test_inverse(a):
    u = a + TruncatedSeries.one(NAMES, 6) - a.constant_part()
    assert u * u.inverse() == TruncatedSeries.one(NAMES, 6)


@given(series2())
def test_json_round_trip(a):
    assert TruncatedSeries.from_json(a.to_json()) == a


def test_cyclotomic_json_round_trip():
    s = TruncatedSeries(("q",), 3, {(1,): CyclotomicInt.zeta(7, 3), (2,): 4}, order=7)
    assert TruncatedSeries.from_json(s.to_json()) == s


def test_text_form():
    assert single("q", 3, [1, 1, 3, 5]).to_text() == "1 + q + 3*q^2 + 5*q^3"
    assert single("q", 2, [0, -1, 2]).to_text() == "-q + 2*q^2"
    assert single("q", 0, []).to_text() == "0"


def test_euler_product_counts_partitions():
    p = [sum(1 for _ in partitions(k)) for k in range(16)]
    assert euler_product_coeffs(-1, 15) == p
    # (1 - t)(1 - t^2)... inverts it
    inv = single("t", 15, euler_product_coeffs(1, 15))
    assert inv * single("t", 15, p) == single("t", 15, [1])


def test_eta_factor_on_a_monomial():
    s = eta_factor((1, 2), -1, 6, NAMES)
    # prod (1 - x^m y^{2m})^{-1}: degree 3m, so m <= 2
    assert s == TruncatedSeries(NAMES, 6, {(0, 0): 1, (1, 2): 1, (2, 4): 2})


def test_theta_rank_one_by_hand_sum():
    # sum over m of x^m (xy)^{m^2}: exponent (m^2 + m, m^2), degree 2m^2 + m
    s = theta_series([[2]], [0], (1, 1), 9, NAMES)
    want = {(m * m + m, m * m): 1 for m in range(-5, 6) if 2 * m * m + m <= 9}
    assert s == TruncatedSeries(NAMES, 9, want)


def test_theta_rejects_odd_diagonal():
    with pytest.raises(ValueError):
        theta_series([[3]], [0], (0, 1), 4, NAMES)


def test_substitution_and_integrality():
    # x -> zeta, y -> q over m = 3: 1 + x + x^2 is zero, x*y is zeta*q
    s = TruncatedSeries(NAMES, 4, {(0, 0): 1, (1, 0): 1, (2, 0): 1, (0, 1): 2})
    sub = substitute_root_of_unity(s, 3, [(1, 0), (0, 1)], truncation=2)
    ok, ints = is_integer_series(sub)
    assert ok and ints.coefficient_list() == [0, 2, 0]
    s2 = s + TruncatedSeries(NAMES, 4, {(1, 1): 1})
    ok, _ = is_integer_series(substitute_root_of_unity(s2, 3, [(1, 0), (0, 1)], truncation=2))
    assert not ok


def test_z0_pair_by_hand():
    kw = dict(weights=(1, 0), laurent=1)
    a = TruncatedSeries(("q", "z"), 4, {(1, 1): 1, (2, -1): 3, (0, 0): 1}, **kw)
    b = TruncatedSeries(("q", "z"), 4, {(1, -1): 2, (1, 1): 5, (3, 0): 1}, **kw)
    # z^0 pieces: 1*q^3 + (q z)(2 q z^-1) + (3 q^2 z^-1)(5 q z)
    assert z0_pair(a, b).coefficient_list() == [0, 0, 2, 1 + 15, 0]
