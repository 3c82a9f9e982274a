from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sepkit.bounds import (
    bound_report,
    gelfond_factor_height_bound,
    gs_abssep_exponent,
    landau_generic_upper,
    landau_upper,
    mahler_measure_enclosure,
    mahler_pair_bound,
    thm1_bound,
    thm2_bound,
)
from sepkit.poly import IntPolynomial as P

# reference values from an independent 40-digit mpmath evaluation of the formulas
MAHLER = {(2, 1): 0.1111111111111111, (2, 10): 0.01111111111111111, (3, 20): 3.382911733532963e-05}
THM1 = {(2, 1): 0.2886751345948129, (3, 1): 0.02209708691207961, (3, 17): 7.646050834629623e-05}
THM2 = {(4, 1): 3.0517578125e-05, (4, 10): 3.0517578125e-07, (5, 1): 7.539457464619587e-09}


@pytest.mark.parametrize("dh,val", MAHLER.items())
def test_mahler_pair_values(dh, val):
    b = mahler_pair_bound(*dh)
    assert b <= Fraction(val) * (1 + Fraction(1, 10**15))
    assert float(b) == pytest.approx(val, rel=1e-15)


def test_mahler_pair_d2_rounds_down_onto_one_ninth():
    b = mahler_pair_bound(2, 1)
    assert b <= Fraction(1, 9) < b + Fraction(1, 2**120)


@pytest.mark.parametrize("dh,val", THM1.items())
def test_thm1_values(dh, val):
    assert float(thm1_bound(*dh)) == pytest.approx(val, rel=1e-15)


def test_thm1_d3_is_exactly_two_to_minus_eleven_halves():
    b = thm1_bound(3, 1)
    assert b * b <= Fraction(1, 2**11) < (b + Fraction(1, 2**120)) ** 2


@pytest.mark.parametrize("dh,val", THM2.items())
def test_thm2_values(dh, val):
    assert float(thm2_bound(*dh)) == pytest.approx(val, rel=1e-15)


def test_thm2_exact_powers_of_two():
    assert thm2_bound(4, 1) == Fraction(1, 2**15)


def test_degree_preconditions():
    with pytest.raises(ValueError):
        mahler_pair_bound(1, 1)
    with pytest.raises(ValueError):
        thm1_bound(1, 5)
    with pytest.raises(ValueError):
        thm2_bound(3, 1)


def test_gs_exponent_and_gelfond():
    assert [gs_abssep_exponent(d) for d in (2, 3, 4)] == [-7, -21, -46]
    assert gelfond_factor_height_bound(4, 10) == 160
    assert gelfond_factor_height_bound(1, 1) == 2
    assert gelfond_factor_height_bound(6, 3) == 192


def test_landau_examples():
    assert float(landau_upper(P([-1, 1]))) == pytest.approx(2 ** 0.5)
    assert landau_upper(P([-1, 1])) ** 2 >= 2
    assert float(landau_upper(P([-1, 0, 100, 1]))) == pytest.approx(100.00999950005)
    assert landau_upper(P([5])) == 5


def test_mahler_measure_examples():
    phi = (1 + 5 ** 0.5) / 2
    m = mahler_measure_enclosure(P([-1, -1, 1]))
    assert float(m.lo) <= phi <= float(m.hi) + 1e-15
    m = mahler_measure_enclosure(P([1, 0, 1]))
    assert m.contains(1)
    m = mahler_measure_enclosure(P([-1, 2]))
    assert m.contains(2)


def test_report_fields():
    r = bound_report(3, 17)
    assert r.thm2 is None and r.gs_certifying is False
    assert r.mahler_pair > 0 and r.thm1 > 0
    assert r.gelfond_factor_height == 136
    r = bound_report(5, 2)
    assert r.thm2 is not None and r.thm2 > 0


dh = st.tuples(st.integers(2, 12), st.integers(1, 1000))


@given(dh)
def test_strictly_decreasing_in_height(x):
    d, H = x
    assert mahler_pair_bound(d, H + 1) < mahler_pair_bound(d, H)
    assert thm1_bound(d, H + 1) < thm1_bound(d, H)
    if d >= 4:
        assert thm2_bound(d, H + 1) < thm2_bound(d, H)


@given(st.tuples(st.integers(2, 12), st.integers(2, 1000)))
def test_strictly_decreasing_in_degree(x):
    d, H = x
    assert mahler_pair_bound(d + 1, H) < mahler_pair_bound(d, H)
    assert thm1_bound(d + 1, H) < thm1_bound(d, H)
    if d >= 4:
        assert thm2_bound(d + 1, H) < thm2_bound(d, H)


@given(dh, st.integers(16, 256))
def test_directed_rounding_is_monotone_in_precision(x, prec):
    d, H = x
    for f in (mahler_pair_bound, thm1_bound) + ((thm2_bound,) if d >= 4 else ()):
        assert f(d, H, prec=2 * prec) >= f(d, H, prec=prec)
    assert landau_generic_upper(d, H, 2 * prec) <= landau_generic_upper(d, H, prec)


@given(st.lists(st.integers(-50, 50), min_size=2, max_size=9).filter(lambda c: c[-1] != 0))
def test_landau_chain(cs):
    p = P(cs)
    d, H = p.degree(), p.height()
    assert landau_upper(p) <= landau_generic_upper(d, H)
    assert landau_upper(p, 256) <= landau_upper(p, 128)
