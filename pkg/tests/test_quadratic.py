from __future__ import annotations

from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symdyn import QuadraticIrrational, parse_alpha, parse_point

from conftest import golden_decimal, silver_decimal


def dec(alpha_dec: Decimal, u: Fraction, v: int) -> Decimal:
    return Decimal(u.numerator) / Decimal(u.denominator) + v * alpha_dec


def frac(x: Decimal) -> Decimal:
    # Decimal's % keeps the sign of the dividend
    return x - x.to_integral_value(rounding="ROUND_FLOOR")


def test_value_is_reduced_into_unit_interval():
    a = QuadraticIrrational.from_pqrd(1, 1, 2, 5)  # (1+sqrt5)/2 reduces to its fractional part
    assert 0 < float(a) < 1
    assert float(a) == pytest.approx(float(golden_decimal()))


def test_rejects_rational():
    with pytest.raises(ValueError):
        parse_alpha("quad: 1 1 2 9")
    with pytest.raises(ValueError):
        parse_alpha("quad: 1 0 2 5")


def test_convergents_golden(golden):
    cvs = golden.convergents(12)
    assert [c.a for c in cvs[1:]] == [1] * 11
    assert [c.q for c in cvs] == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]


def test_convergents_silver(silver):
    cvs = silver.convergents(8)
    assert [c.a for c in cvs[1:]] == [2] * 7
    assert [c.q for c in cvs[1:]] == [2, 5, 12, 29, 70, 169, 408]


@pytest.mark.parametrize("text,ad", [("quad: -1 1 2 5", golden_decimal), ("quad: -1 1 1 2", silver_decimal)])
def test_eta_positive_decreasing_and_exact(text, ad):
    a = parse_alpha(text)
    x = ad()
    cvs = a.convergents(25)
    etas = [c.eta for c in cvs]
    assert all(e.sign() > 0 for e in etas)
    assert all(etas[i + 1] < etas[i] for i in range(len(etas) - 1))
    for c in cvs:
        assert abs(dec(x, c.eta.u, c.eta.v) - abs(c.q * x - c.p)) < Decimal(10) ** -60


def test_cf_form_parsing():
    assert float(parse_alpha("cf: 0; (1)")) == pytest.approx(float(golden_decimal()))
    assert float(parse_alpha("cf: 0; (2)")) == pytest.approx(float(silver_decimal()))
    a = parse_alpha("cf: 0; 3, (1, 2)")
    assert float(a) == pytest.approx(2 - 3**0.5)
    assert [a.partial_quotient(k) for k in range(1, 8)] == [3, 1, 2, 1, 2, 1, 2]
    with pytest.raises(ValueError):
        parse_alpha("cf: 0; 1, 2")
    with pytest.raises(ValueError):
        parse_alpha("pi")


def test_point_parsing(golden):
    assert parse_point(golden, "2a") == golden.point(0, 2)
    p = parse_point(golden, "1/3 -1")
    assert float(p) == pytest.approx((1 / 3 - float(golden)) % 1)
    with pytest.raises(ValueError):
        parse_point(golden, "1 2 3")


def test_point_negation_and_shift(golden):
    p = golden.point(0, 1)
    assert (-p) == golden.point(0, -1)
    assert p.shift(-1) == golden.point(0, 0)
    assert float(-p) == pytest.approx(1 - float(golden))


@settings(max_examples=300, deadline=None)
@given(
    st.fractions(min_value=-50, max_value=50, max_denominator=1000),
    st.integers(-10**6, 10**6),
)
def test_sign_and_floor_agree_with_high_precision(u, v):
    for a, ad in ((parse_alpha("quad: -1 1 2 5"), golden_decimal()), (parse_alpha("quad: -1 1 1 2"), silver_decimal())):
        exact = dec(ad, u, v)
        s = a.sign(u, v)
        assert s == (exact > 0) - (exact < 0)
        assert a.floor(u, v) == int(exact.to_integral_value(rounding="ROUND_FLOOR"))


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**5, 10**5), st.integers(-10**5, 10**5))
def test_point_order_is_total_and_matches_decimal(m, n):
    a = parse_alpha("quad: -1 1 2 5")
    x, y = a.point(0, m), a.point(0, n)
    dx, dy = frac(m * golden_decimal()), frac(n * golden_decimal())
    assert (x < y) == (dx < dy)
    assert (x == y) == (m == n)
