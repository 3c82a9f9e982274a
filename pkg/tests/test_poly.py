from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from sepkit.dyadic import Interval
from sepkit.errors import DegreeOfZero, ZeroOperand
from sepkit.poly import (
    IntPolynomial as P,
    derivative,
    discriminant,
    evaluate_exact,
    evaluate_interval,
    exact_quotient,
    gcd_primitive,
    has_opposite_root_pair,
    is_separable,
    negate_argument,
    parse_poly,
    product_polynomial,
    pseudo_remainder,
    resultant,
    self_opposite_resultant,
    squarefree_decomposition,
    squarefree_part,
    sylvester_matrix,
)


def polys(max_deg=6, H=20, min_deg=1):
    @st.composite
    def build(draw):
        d = draw(st.integers(min_deg, max_deg))
        cs = draw(st.lists(st.integers(-H, H), min_size=d, max_size=d))
        lead = draw(st.integers(-H, H).filter(bool))
        return P(cs + [lead])
    return build()


# ------------------------------------------------------------ examples


def test_degree_height_examples():
    assert P([1]).degree() == 0
    assert P([-1, 0, 100, 1]).degree() == 3
    assert P([2, -13, 17, 14]).degree() == 3
    assert P([-1, 0, 100, 1]).height() == 100
    assert P([-1, 1]).height() == 1
    assert P([8, -7, -9, 17]).height() == 17


def test_zero_polynomial_is_distinguished():
    assert P([0, 0]) == P() == P([])
    with pytest.raises(DegreeOfZero):
        P().degree()
    with pytest.raises(DegreeOfZero):
        P([0]).height()


def test_evaluate_exact_examples():
    assert evaluate_exact(P([-1, 0, 1]), 1) == 0
    assert evaluate_exact(P([-1, 0, 7]), 0) == -1
    # x^3 + 100x^2 - 1 at -1/10: -1/1000 + 1 - 1
    assert evaluate_exact(P([-1, 0, 100, 1]), Fraction(-1, 10)) == Fraction(-1, 1000)


def test_evaluate_interval_examples():
    assert evaluate_interval(P([0, 0, 1]), Interval.point(1)) == Interval.point(1)
    enc = evaluate_interval(P([-2, 0, 1]), Interval(Fraction("1.414"), Fraction("1.415")))
    assert enc.contains_zero()
    enc = evaluate_interval(P([-1, 0, 100, 1]), Interval(Fraction("-0.100005"), Fraction("-0.100004")))
    assert enc.hi < 0


def test_negate_argument_and_derivative_examples():
    assert negate_argument(P([-1, -1, 1])) == P([-1, 1, 1])
    assert negate_argument(P([1, 0, 1])) == P([1, 0, 1])
    assert negate_argument(P([-1, 0, 100, 1])) == P([-1, 0, 100, -1])
    assert derivative(P([0, 0, 0, 1])) == P([0, 0, 3])
    assert derivative(P([5])).is_zero
    assert derivative(P([-1, 0, 100, 1])) == P([0, 200, 3])


def test_resultant_examples():
    assert resultant(P([-1, 1]), P([1, 1])) == 2
    assert resultant(P([-1, -1, 1]), P([-1, 1, 1])) == -4
    assert resultant(P([0, 1]), P([1, 1])) == 1
    with pytest.raises(ZeroOperand):
        resultant(P(), P([1, 1]))


def test_self_opposite_resultant_examples():
    assert self_opposite_resultant(P([1, 0, 1])) == 0
    assert self_opposite_resultant(P([-1, -1, 1])) == -4
    r = self_opposite_resultant(P([-1, 1]))
    assert abs(r) >= 1 and r % 1 == 0


def test_discriminant_examples():
    assert discriminant(P([-1, 0, 1])) == 4
    assert discriminant(P([0, 0, 1])) == 0
    assert discriminant(P([-1, -1, 1])) == 5
    assert is_separable(P([-1, 0, 1]))
    assert not is_separable(P([0, 0, 1]))
    assert not is_separable(P([-1, -1, 1]) ** 2)


def test_opposite_pair_examples():
    assert has_opposite_root_pair(P([-1, 0, 1]))
    assert not has_opposite_root_pair(P([-1, -1, 1]))
    assert not has_opposite_root_pair(P([-1, 0, 100, 1]))


def test_gcd_and_squarefree_examples():
    assert gcd_primitive(P([-1, 0, 1]), P([-1, 1])) == P([-1, 1])
    assert gcd_primitive(P([3, 4, 5]), P([1])) == P([1])
    assert gcd_primitive(P([1, 0, 1]), P([1, 0, 1])) == P([1, 0, 1])
    assert squarefree_part(P([0, 0, 1])) == P([0, 1])
    assert squarefree_part(P([-1, 0, 1])) == P([-1, 0, 1])
    assert squarefree_part(P.from_roots([1, 1, -2])) == P.from_roots([1, -2])


def test_product_polynomial_examples():
    T = product_polynomial(P([-1, 0, 1]))
    assert T.degree() == 4
    assert exact_quotient(T, P([-1, 1]) ** 2 * P([1, 1]) ** 2).degree() == 0
    assert product_polynomial(P([-2, 1])) == P([-4, 1])
    T = product_polynomial(P([-1, -1, 1]))
    with mpmath.workdps(40):
        got = sorted(oracles.roots_mp(T.coeffs, 40), key=lambda z: (float(mpmath.re(z)), float(mpmath.im(z))))
        phi = (1 + mpmath.sqrt(5)) / 2
        psi = (1 - mpmath.sqrt(5)) / 2
        want = sorted([phi ** 2, -1, -1, psi ** 2])
        for g, w in zip(got, want):
            assert abs(g - w) < 1e-15


def test_sylvester_matrix_shape_and_determinant():
    S = sylvester_matrix(P([-1, -1, 1]), P([-1, 1, 1]))
    assert len(S.entries) == 4 and all(len(r) == 4 for r in S.entries)
    assert S.determinant() == -4


def test_parse_poly_formats():
    assert parse_poly("2,-13,17,14") == P([2, -13, 17, 14])
    assert parse_poly('["2", "-13", "17", "14"]') == P([2, -13, 17, 14])
    assert parse_poly("[1, 0, 100000000000000000000000000001]").coeffs[-1] == 10**29 + 1


def test_squarefree_decomposition_reassembles():
    Q = P.from_roots([1, 1, 1, 2, 2]) * P([1, 0, 1]) * P([-3, 1])
    parts = squarefree_decomposition(Q)
    prod = P([1])
    for f, k in parts:
        prod = prod * f ** k
    assert exact_quotient(Q, prod).degree() == 0
    assert sorted(k for _, k in parts) == [1, 2, 3]


# ------------------------------------------------------------ properties


@given(polys(), polys())
def test_resultant_matches_plain_elimination(p, q):
    assert resultant(p, q) == oracles.sylvester_det(p.coeffs, q.coeffs)


@given(polys(), polys())
def test_resultant_antisymmetry(p, q):
    d1, d2 = p.degree(), q.degree()
    assert resultant(p, q) == (-1) ** (d1 * d2) * resultant(q, p)


@given(polys(max_deg=5, H=10), polys(max_deg=5, H=10))
def test_poisson_formula(p, q):
    with mpmath.workdps(80):
        ra = oracles.roots_mp(p.coeffs, 80)
        rb = oracles.roots_mp(q.coeffs, 80)
        prod = mpmath.mpf(p.lead) ** q.degree() * mpmath.mpf(q.lead) ** p.degree()
        for a in ra:
            for b in rb:
                prod *= a - b
        r = resultant(p, q)
        assert abs(prod - r) <= mpmath.mpf(10) ** -40 * max(1, abs(r))


@given(polys())
def test_negate_argument_is_involution(p):
    assert negate_argument(negate_argument(p)) == p


@given(polys(max_deg=7, H=30))
def test_self_opposite_resultant_divisibility(p):
    assume(p.coeffs[0] != 0)
    r = self_opposite_resultant(p)
    assert r % (p.coeffs[0] * p.lead) == 0


@given(polys(max_deg=5, H=10))
def test_self_opposite_resultant_product_formula(p):
    assume(p.coeffs[0] != 0)
    d = p.degree()
    with mpmath.workdps(80):
        rs = oracles.roots_mp(p.coeffs, 80)
        val = mpmath.mpf(p.coeffs[0]) * mpmath.mpf(p.lead) ** (2 * d - 1) * 2 ** d
        for i in range(d):
            for j in range(i + 1, d):
                val *= (rs[i] + rs[j]) ** 2
        r = self_opposite_resultant(p)
        assert abs(val - r) <= mpmath.mpf(10) ** -40 * max(1, abs(r))


@given(polys(max_deg=6, H=10), polys(max_deg=3, H=5))
def test_squarefree_part_divides_and_is_separable(p, q):
    f = p * q * q
    s = squarefree_part(f)
    # s divides f over the rationals: the pseudo-remainder vanishes
    assert pseudo_remainder(f, s).is_zero
    if s.degree() >= 1:
        assert is_separable(s)


@given(polys(max_deg=4, H=10, min_deg=2))
def test_product_polynomial_roots_are_pairwise_products(p):
    assume(p.coeffs[0] != 0)
    T = product_polynomial(p)
    d = p.degree()
    assert T.degree() == d * d
    with mpmath.workdps(60):
        rs = oracles.roots_mp(p.coeffs, 60)
        for a in rs:
            for b in rs:
                v = a * b
                scale = max(1, abs(v)) ** (d * d)
                # T(ab) vanishes relative to the size of its terms
                acc = 0
                mag = 0
                for k, c in enumerate(T.coeffs):
                    acc += c * v ** k
                    mag += abs(c) * abs(v) ** k
                assert abs(acc) <= mpmath.mpf(10) ** -30 * mag
