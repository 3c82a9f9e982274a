from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from sepkit.dyadic import Ball, Interval, is_dyadic, round_down, round_up, sqrt_down, sqrt_up, to_decimal

rationals = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)
positive = st.fractions(min_value=Fraction(1, 10**9), max_value=10**9, max_denominator=10**9)
precs = st.integers(2, 200)


@given(rationals, precs)
def test_directed_rounding_brackets(x, prec):
    lo, hi = round_down(x, prec), round_up(x, prec)
    assert lo <= x <= hi
    assert is_dyadic(lo) and is_dyadic(hi)


@given(positive, precs)
def test_sqrt_brackets(x, prec):
    lo, hi = sqrt_down(x, prec), sqrt_up(x, prec)
    assert lo * lo <= x <= hi * hi
    assert (hi - lo) <= hi * Fraction(1, 2 ** (prec - 2))


@given(positive, precs)
def test_more_precision_never_loosens(x, prec):
    assert sqrt_down(x, 2 * prec) >= sqrt_down(x, prec)
    assert sqrt_up(x, 2 * prec) <= sqrt_up(x, prec)
    assert round_down(x, 2 * prec) >= round_down(x, prec)


def test_exact_squares_are_exact():
    assert sqrt_down(Fraction(9, 4), 10) == Fraction(3, 2) == sqrt_up(Fraction(9, 4), 10)


@given(positive)
def test_decimal_directions(x):
    assert Fraction(to_decimal(x, 17, "down").replace("e", "e")) <= x <= Fraction(to_decimal(x, 17, "up"))


@given(rationals, rationals, rationals, rationals)
def test_interval_ops_contain_pointwise(a, b, c, d):
    I, J = Interval(min(a, b), max(a, b)), Interval(min(c, d), max(c, d))
    for x in (I.lo, I.hi, I.mid):
        for y in (J.lo, J.hi, J.mid):
            assert (I + J).contains(x + y)
            assert (I - J).contains(x - y)
            assert (I * J).contains(x * y)
            assert (I.abs()).contains(abs(x))


@given(rationals, rationals, st.fractions(0, 10, max_denominator=1000),
       rationals, rationals, st.fractions(0, 10, max_denominator=1000))
def test_ball_product_contains_products(a, b, r, c, d, s):
    X, Y = Ball(a, b, r), Ball(c, d, s)
    Z = X * Y
    # corner points of each ball multiplied stay inside the product ball
    for (u, v) in ((a + r, b), (a, b - r)):
        for (p, q) in ((c - s, d), (c, d + s)):
            assert Z.contains(u * p - v * q, u * q + v * p)
    m = X.abs(64)
    assert m.lo <= abs(complex(float(a), float(b))) * (1 + 1e-12) + float(r)
