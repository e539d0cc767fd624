"""Laurent polynomial kernel: arithmetic, exact division, scales."""

from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stringysurf import WPoly
from stringysurf.errors import InexactDivision, ScaleMismatch

coeffs = st.integers(min_value=-9, max_value=9)
exponents = st.integers(min_value=-12, max_value=12)


@st.composite
def wpolys(draw, t=6):
    terms = draw(st.dictionaries(exponents, coeffs, max_size=6))
    return WPoly(t, terms)


def test_monomial_and_scale():
    p = WPoly.monomial(Q(3, 5), 5)
    assert p.coeff(Q(3, 5)) == 1
    assert p.max_exp() == Q(3, 5)
    with pytest.raises(ScaleMismatch):
        WPoly.monomial(Q(1, 3), 5)


def test_scale_mismatch_in_arithmetic():
    with pytest.raises(ScaleMismatch):
        WPoly.const(1, 2) + WPoly.const(1, 3)


def test_geometric_series_telescopes():
    # (1 + z^a + ... + z^((k-1)a)) (z^a - 1) = z^(ka) - 1
    for a, k, t in [(Q(3, 5), 3, 5), (Q(1, 2), 4, 2), (Q(2), 5, 1)]:
        geo = WPoly.geometric(a, k, t)
        left = geo * (WPoly.monomial(a, t) - 1)
        assert left == WPoly.monomial(a * k, t) - 1


def test_geometric_zero_discrepancy_is_constant():
    assert WPoly.geometric(0, 4, 3) == WPoly.const(4, 3)
    assert WPoly.geometric(Q(1, 3), 0, 3).is_zero()


def test_eq_across_scales():
    assert WPoly.monomial(Q(1, 2), 2) == WPoly.monomial(Q(1, 2), 4)
    assert WPoly.monomial(Q(1, 2), 2) != WPoly.monomial(Q(1, 4), 4)


@given(wpolys(), wpolys(), wpolys())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(wpolys(), wpolys())
@settings(max_examples=80, deadline=None)
def test_exact_division_recovers_factor(a, b):
    if b.is_zero():
        return
    product = a * b
    assert product.divexact(b) == a


def test_division_failures():
    t = 2
    z = WPoly.monomial(1, t)
    with pytest.raises(InexactDivision):
        (z + 1).divexact(z - 1)
    assert (z + 1).try_div(z - 1) is None
    # not divisible over the integers even though it is over the rationals
    assert WPoly.monomial(1, 1).try_div(WPoly.const(2, 1)) is None


def test_laurent_division_handles_units():
    t = 3
    p = WPoly.monomial(Q(-2, 3), t) - WPoly.monomial(Q(1, 3), t)
    q = p.divexact(WPoly.monomial(Q(-1, 3), t))
    assert q == WPoly.monomial(Q(-1, 3), t) - WPoly.monomial(Q(2, 3), t)


def test_cyclotomic_style_quotient():
    w = WPoly.monomial(Q(1, 4), 4)  # the scaled variable itself
    assert (w ** 4 - 1).divexact(w - 1) == w ** 3 + w ** 2 + w + 1


@given(wpolys())
@settings(max_examples=40, deadline=None)
def test_evaluation_is_ring_morphism(p):
    w = Q(3, 2)
    q = p * p + 2
    assert q.evaluate(w) == p.evaluate(w) ** 2 + 2


def test_falling_sum_matches_taylor_coefficients():
    # p = (w - 1)^2 (w + 2): first two derivative sums vanish at w = 1
    t = 1
    w = WPoly.monomial(1, 1)
    p = (w - 1) * (w - 1) * (w + 2)
    assert p.falling_sum(0) == 0
    assert p.falling_sum(1) == 0
    assert p.falling_sum(2) == 2 * 3  # 2! * (value of (w+2) at 1)
    del t


def test_serialization_round_trip():
    p = WPoly(10, {3: 2, -5: -1, 0: 7})
    data = p.to_json()
    assert data == [
        {"exp": "-1/2", "coef": "-1"},
        {"exp": "0", "coef": "7"},
        {"exp": "3/10", "coef": "2"},
    ]
    assert WPoly.from_json(data, 10) == p
    assert WPoly.from_json(data) == p  # scale inferred


def test_str_is_sorted_and_reduced():
    p = WPoly(5, {4: 1, 0: 1, 6: -3})
    assert str(p) == "1 + z^(4/5) - 3*z^(6/5)"
