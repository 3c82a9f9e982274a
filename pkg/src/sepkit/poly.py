"""Exact arithmetic on univariate polynomials with integer coefficients.

Coefficients are stored in ascending order: ``coeffs[k]`` is the coefficient
of ``x**k``.  All operations are exact; resultants use fraction-free
(Bareiss) elimination on the Sylvester matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .dyadic import Interval
from .errors import DegreeOfZero, ZeroOperand


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_roots(cls, roots: Sequence[int], lead: int = 1) -> "IntPolynomial":
        p = cls([lead])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPolynomial":
        return cls([0] * k + [c])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        if not self.coeffs:
            raise DegreeOfZero("the zero polynomial has no degree")
        return len(self.coeffs) - 1

    def height(self) -> int:
        if not self.coeffs:
            raise DegreeOfZero("the zero polynomial has no height")
        return max(abs(c) for c in self.coeffs)

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self), len(other))
        return IntPolynomial(self[k] + other[k] for k in range(n))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        if self.is_zero or other.is_zero:
            return IntPolynomial()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPolynomial":
        out = IntPolynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, t):
        return evaluate_exact(self, t)

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> "IntPolynomial":
        """Divide out the content and make the leading coefficient positive."""
        if self.is_zero:
            return self
        g = self.content()
        if self.lead < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    def compose_scale(self, s: int) -> "IntPolynomial":
        """Coefficients of P(s*x)."""
        return IntPolynomial(c * s**k for k, c in enumerate(self.coeffs))

    def deflate_zero(self) -> tuple["IntPolynomial", int]:
        """Split P = x**m * Q with Q(0) != 0; returns (Q, m)."""
        m = 0
        while m < len(self.coeffs) and self.coeffs[m] == 0:
            m += 1
        return IntPolynomial(self.coeffs[m:]), m

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            coef = "" if (a == 1 and k > 0) else str(a)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            terms.append((sign, coef + ("*" if coef and mono else "") + mono))
        first_sign, first = terms[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, t in terms[1:]:
            s += f" {sign} {t}"
        return s


ZERO_POLY = IntPolynomial()


def parse_poly(text: str) -> IntPolynomial:
    """Parse ascending coefficients: ``"2,-13,17,14"`` or a JSON array."""
    text = text.strip()
    if text.startswith("["):
        values = json.loads(text)
        return IntPolynomial(int(v) for v in values)
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty coefficient list")
    return IntPolynomial(int(p) for p in parts)


def degree(P: IntPolynomial) -> int:
    return P.degree()


def height(P: IntPolynomial) -> int:
    return P.height()


def evaluate_exact(P: IntPolynomial, t) -> Fraction:
    """P(t) by Horner's scheme over the rationals."""
    t = Fraction(t)
    acc = Fraction(0)
    for c in reversed(P.coeffs):
        acc = acc * t + c
    return acc


def evaluate_interval(P: IntPolynomial, t: Interval, prec: int | None = None) -> Interval:
    """Interval Horner evaluation; the result contains P(x) for every x in t.

    With ``prec`` set, intermediate endpoints are rounded outward to dyadics of
    that many bits, which keeps the numbers short at the cost of width.
    """
    acc = Interval.point(0)
    for c in reversed(P.coeffs):
        acc = acc * t + c
        if prec is not None:
            acc = acc.round(prec)
    return acc


def negate_argument(P: IntPolynomial) -> IntPolynomial:
    """P(-x)."""
    return IntPolynomial(c if k % 2 == 0 else -c for k, c in enumerate(P.coeffs))


def derivative(P: IntPolynomial) -> IntPolynomial:
    return IntPolynomial(k * c for k, c in enumerate(P.coeffs) if k > 0)


@dataclass(frozen=True)
class SylvesterMatrix:
    entries: tuple[tuple[int, ...], ...]
    d1: int
    d2: int

    def determinant(self) -> int:
        return bareiss_det([list(r) for r in self.entries])


def sylvester_matrix(P: IntPolynomial, Q: IntPolynomial) -> SylvesterMatrix:
    """Sylvester matrix: d2 shifted rows of P, then d1 shifted rows of Q.

    Rows list coefficients from the leading one down, so that the
    determinant is ``res(P, Q) = a^d2 b^d1 prod(alpha_i - beta_j)``.
    """
    if P.is_zero or Q.is_zero:
        raise ZeroOperand("resultant with the zero polynomial")
    d1, d2 = P.degree(), Q.degree()
    n = d1 + d2
    p = P.coeffs[::-1]
    q = Q.coeffs[::-1]
    rows = []
    for i in range(d2):
        rows.append(tuple([0] * i + list(p) + [0] * (n - d1 - 1 - i)))
    for i in range(d1):
        rows.append(tuple([0] * i + list(q) + [0] * (n - d2 - 1 - i)))
    return SylvesterMatrix(tuple(rows), d1, d2)


def bareiss_det(A: list[list[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination (in place)."""
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        rk = A[k]
        akk = rk[k]
        for i in range(k + 1, n):
            ri = A[i]
            aik = ri[k]
            if aik == 0:
                if akk != 1 or prev != 1:
                    for j in range(k + 1, n):
                        ri[j] = ri[j] * akk // prev
            else:
                for j in range(k + 1, n):
                    ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def resultant(P: IntPolynomial, Q: IntPolynomial) -> int:
    """Exact determinant of the Sylvester matrix of P and Q."""
    return sylvester_matrix(P, Q).determinant()


def self_opposite_resultant(P: IntPolynomial) -> int:
    """r = res(P(x), P(-x)); nonzero values are multiples of a_0 * a_d."""
    if P.is_zero or P.degree() < 1:
        raise ValueError("need a polynomial of degree >= 1")
    r = resultant(P, negate_argument(P))
    a0ad = P.coeffs[0] * P.lead
    if r != 0:
        assert r % a0ad == 0, "resultant not divisible by a_0 a_d"
    return r


def discriminant(P: IntPolynomial) -> int:
    """(-1)^(d(d-1)/2) res(P, P') / a_d."""
    d = P.degree()
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    r = resultant(P, derivative(P))
    q, rem = divmod(r, P.lead)
    assert rem == 0
    return -q if (d * (d - 1) // 2) % 2 else q


def is_separable(P: IntPolynomial) -> bool:
    return discriminant(P) != 0


def has_opposite_root_pair(P: IntPolynomial) -> bool:
    """True iff alpha_i + alpha_j = 0 for some roots (a root at 0 counts)."""
    return self_opposite_resultant(P) == 0


def pseudo_remainder(A: IntPolynomial, B: IntPolynomial) -> IntPolynomial:
    """lc(B)^(deg A - deg B + 1) * A mod B, over the integers."""
    if B.is_zero:
        raise ZeroDivisionError("pseudo-remainder by the zero polynomial")
    db = B.degree()
    if A.is_zero or A.degree() < db:
        return A
    b = B.coeffs
    lc = b[-1]
    r = list(A.coeffs)
    e = len(r) - db
    while r and len(r) - 1 >= db:
        top = r[-1]
        shift = len(r) - 1 - db
        r = [c * lc for c in r]
        for j in range(db + 1):
            r[shift + j] -= top * b[j]
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    return IntPolynomial(c * lc**e for c in r)


def exact_quotient(A: IntPolynomial, B: IntPolynomial) -> IntPolynomial:
    """A / B when B divides A over the rationals; returned primitive."""
    if B.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    r = [Fraction(c) for c in A.coeffs]
    db = B.degree()
    b = B.coeffs
    q = [Fraction(0)] * max(len(r) - db, 0)
    for k in range(len(r) - 1 - db, -1, -1):
        t = r[k + db] / b[-1]
        q[k] = t
        if t:
            for j in range(db + 1):
                r[k + j] -= t * b[j]
    if any(r[:db]):
        raise ValueError("division is not exact")
    den = math.lcm(*(x.denominator for x in q)) if q else 1
    return IntPolynomial(int(x * den) for x in q).primitive()


def gcd_primitive(P: IntPolynomial, Q: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over the rationals, positive leading coefficient.

    Pseudo-remainder sequence with the content removed after every step.
    """
    if P.is_zero and Q.is_zero:
        raise ValueError("gcd of two zero polynomials")
    if P.is_zero:
        return Q.primitive()
    if Q.is_zero:
        return P.primitive()
    A, B = P.primitive(), Q.primitive()
    if A.degree() < B.degree():
        A, B = B, A
    while not B.is_zero:
        if B.degree() == 0:
            return IntPolynomial([1])
        R = pseudo_remainder(A, B)
        A, B = B, R.primitive()
    return A.primitive()


def squarefree_part(P: IntPolynomial) -> IntPolynomial:
    """P / gcd(P, P'), primitive: the same roots, each with multiplicity one."""
    if P.degree() < 1:
        raise ValueError("squarefree part needs degree >= 1")
    g = gcd_primitive(P, derivative(P))
    if g.degree() == 0:
        return P.primitive()
    return exact_quotient(P, g)


def _interpolate_consecutive(values: Sequence[int]) -> IntPolynomial:
    """Integer polynomial through (k, values[k]) for k = 0..n-1."""
    n = len(values)
    diffs = list(values)
    newton = []
    for _ in range(n):
        newton.append(diffs[0])
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
    # sum_k newton[k] * binom(y, k)
    acc = [Fraction(0)] * n
    falling = [Fraction(1)]  # y (y-1) ... (y-k+1) / k!
    for k in range(n):
        if newton[k]:
            for i, c in enumerate(falling):
                acc[i] += newton[k] * c
        nxt = [Fraction(0)] * (len(falling) + 1)
        for i, c in enumerate(falling):
            nxt[i + 1] += c
            nxt[i] -= k * c
        falling = [c / (k + 1) for c in nxt]
    assert all(c.denominator == 1 for c in acc)
    return IntPolynomial(int(c) for c in acc)


def product_polynomial(P: IntPolynomial) -> IntPolynomial:
    """Res_x(P(x), x^d P(y/x)): degree d^2, roots alpha_i * alpha_j.

    The leading coefficient is a_d^(2d).  Coefficients are recovered by
    evaluating the resultant at y = 0..d^2 and interpolating exactly.
    """
    d = P.degree()
    if d < 1:
        raise ValueError("product polynomial needs degree >= 1")
    if P.coeffs[0] == 0:
        raise ValueError("product polynomial needs a nonzero constant coefficient")
    D = d * d
    values = []
    for y in range(D + 1):
        # coefficient of x^j in x^d P(y/x) is a_{d-j} y^{d-j}
        Qy = IntPolynomial(P.coeffs[d - j] * y ** (d - j) for j in range(d + 1))
        values.append(resultant(P, Qy))
    T = _interpolate_consecutive(values)
    assert T.degree() == D
    return T


def squarefree_decomposition(P: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm: primitive squarefree f_k with P = c * prod f_k^k.

    Factors of degree zero are dropped; the constant c is not returned.
    """
    if P.degree() < 1:
        return []
    out = []
    a = P.primitive()
    b = derivative(a)
    c = gcd_primitive(a, b)
    w = exact_quotient(a, c)
    k = 1
    while w.degree() > 0:
        y = gcd_primitive(w, c)
        z = exact_quotient(w, y)
        if z.degree() > 0:
            out.append((z, k))
        c = exact_quotient(c, y) if c.degree() > 0 else c
        w = y
        k += 1
    return out
