"""Polynomial families whose two small real roots nearly cancel.

Starting from Mx^2 - 1, with roots +-M^(-1/2), each family perturbs the
polynomial so that the sum of the two small roots is about M^(-d+1) while
the height stays M.  The module builds the polynomials, transcribes the
asymptotic root expansions, and certifies the roots with sign changes of P
at dyadic points, evaluated exactly.

Expansions are written in s = M^(-1/2).  Because s is irrational the
certificate endpoints are computed from a tight interval around s and then
snapped outwards to a dyadic grid finer than M^(-d-1).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .dyadic import Interval, sqrt_down, sqrt_up
from .errors import CertificateFailed
from .poly import IntPolynomial, derivative, evaluate_exact
from . import roots as _roots

PAPER = "paper"
ALTERNATE_ODD = "alternate_odd"
DEFAULT_C = 2


@dataclass(frozen=True)
class FamilySpec:
    d: int
    M: int
    variant: str = PAPER

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("family degree must be >= 2")
        if self.M < 1:
            raise ValueError("M must be a positive integer")
        if self.variant not in (PAPER, ALTERNATE_ODD):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == ALTERNATE_ODD and (self.d % 2 == 0 or self.d < 5):
            raise ValueError("the alternate family needs odd d >= 5")


def _x(k: int) -> IntPolynomial:
    return IntPolynomial.monomial(k)


def build(spec: FamilySpec) -> IntPolynomial:
    d, M = spec.d, spec.M
    one = IntPolynomial([1])
    base = IntPolynomial([-1, 0, M])  # M x^2 - 1
    if spec.variant == ALTERNATE_ODD:
        # degree d with leading coefficient M, from the M x^2 * x^(d-2) term
        return _x(d - 1) - base * (one - _x(d - 2))
    if d == 2:
        return IntPolynomial([-1, -1, M])
    if d == 3:
        return IntPolynomial([-1, 0, M, 1])
    if d % 2 == 0:
        return _x(d) - base * (one - _x(d - 3))
    c = [0] * (d + 1)
    c[d] += 1
    c[d - 1] -= M - 1
    c[d - 3] += 1
    c[3] -= M
    c[2] -= M
    c[1] += 1
    c[0] += 1
    return IntPolynomial(c)


# ------------------------------------------------------------ expansions

# Each expansion is a list of (coefficient, power of s) terms.


def _expansion_terms(d: int) -> tuple[list, list]:
    h = Fraction(1, 2)
    if d == 3:
        return [(-1, 1), (-h, 4)], [(1, 1), (-h, 4)]
    if d % 2 == 0:
        return ([(-1, 1), (-h, d + 1), (h, 2 * d - 2)],
                [(1, 1), (h, d + 1), (h, 2 * d - 2)])
    return ([(-1, 1), (-h, d), (h, 2 * d - 3), (h, 2 * d - 2)],
            [(1, 1), (h, d), (-h, 2 * d - 3), (h, 2 * d - 2)])


def error_exponent(d: int) -> tuple[Fraction, Fraction]:
    """(stated, observed) exponent of M in the expansion error.

    The two differ only for d = 4, where the next term is (1/2) M^(-7/2)
    rather than O(M^(-9/2)).
    """
    if d == 3:
        return Fraction(-7, 2), Fraction(-7, 2)
    if d % 2 == 0:
        stated = Fraction(-(2 * d + 1), 2)
        return stated, (Fraction(-7, 2) if d == 4 else stated)
    e = Fraction(-(2 * d - 1), 2)
    return e, e


def _m_power(M: int, e: Fraction, prec: int, up: bool) -> Fraction:
    """Directed dyadic bound of M^e for a half-integer e."""
    two_e = int(e * 2)
    if two_e % 2 == 0:
        return Fraction(M) ** (two_e // 2)
    sq = Fraction(M) ** two_e
    return sqrt_up(sq, prec) if up else sqrt_down(sq, prec)


def _grid_bits(spec: FamilySpec) -> int:
    # 2^-k <= M^(-d-1) / 4
    return (spec.M ** (spec.d + 1)).bit_length() + 2


def _snap(x: Fraction, k: int, up: bool) -> Fraction:
    scaled = x * (1 << k)
    n = math.ceil(scaled) if up else math.floor(scaled)
    return Fraction(n, 1 << k)


def _expansion_interval(terms, s: Interval) -> Interval:
    acc = Interval.point(0)
    for coef, p in terms:
        acc = acc + (s ** p) * coef
    return acc


def _s_interval(spec: FamilySpec) -> Interval:
    prec = _grid_bits(spec) + 32
    return Interval(sqrt_down(Fraction(1, spec.M), prec), sqrt_up(Fraction(1, spec.M), prec))


@dataclass(frozen=True)
class ExpectedRoots:
    alpha: Fraction
    beta: Fraction
    error_exponent: Fraction
    stated_error_exponent: Fraction

    @property
    def error_scale(self) -> float:
        return float(self.error_exponent)


def expected_roots(spec: FamilySpec) -> ExpectedRoots:
    """Dyadic approximations of the two small real roots, alpha < 0 < beta.

    The approximations carry only the truncated expansion; the error
    exponents are metadata, not a certified bound.
    """
    if spec.variant != PAPER:
        raise ValueError("expansions are only known for variant='paper'")
    if spec.d == 2:
        raise ValueError("for d = 2 the roots are (1 +- sqrt(1 + 4M)) / (2M) exactly")
    a_terms, b_terms = _expansion_terms(spec.d)
    s = _s_interval(spec)
    k = _grid_bits(spec)
    a = _expansion_interval(a_terms, s)
    b = _expansion_interval(b_terms, s)
    stated, observed = error_exponent(spec.d)
    return ExpectedRoots(_snap(a.mid, k, False), _snap(b.mid, k, False), observed, stated)


def expected_abssep(spec: FamilySpec) -> Fraction:
    """Leading-order |alpha + beta|: 1/M for d = 2, M^(-d+1) otherwise."""
    if spec.d == 2 and spec.variant == PAPER:
        return Fraction(1, spec.M)
    return Fraction(1, spec.M ** (spec.d - 1))


# ------------------------------------------------------------ certificates


@dataclass(frozen=True)
class SignInterval:
    interval: Interval
    expected: tuple[int, int]
    observed: tuple[int, int]

    @property
    def ok(self) -> bool:
        return self.expected == self.observed and 0 not in self.observed


@dataclass(frozen=True)
class SignCertificate:
    spec: FamilySpec
    intervals: tuple[SignInterval, SignInterval]

    @property
    def passed(self) -> bool:
        a, b = self.intervals
        return a.ok and b.ok and a.interval.hi < 0 < b.interval.lo

    @property
    def sum_enclosure(self) -> Interval:
        """Interval for alpha + beta implied by the two root intervals."""
        a, b = self.intervals
        return a.interval + b.interval


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _half_width(spec: FamilySpec, k: int) -> Fraction:
    """max(M^-d, 2 M^e) with e the observed error exponent, rounded up."""
    _, e = error_exponent(spec.d)
    w = max(Fraction(1, spec.M ** spec.d), 2 * _m_power(spec.M, e, k + 8, True))
    return _snap(w, k, True)


def sign_change_certificate(spec: FamilySpec, check: bool = True) -> SignCertificate:
    """Two dyadic intervals where P changes sign, one per small root.

    For d = 3 these are the one-sided intervals
    [e - M^-3, e] around alpha and [e, e + M^-3] around beta, with e the
    truncated expansion.  For larger d the interval is centred on the
    expansion with half-width max(M^-d, twice the expansion error).
    Expected signs follow from the sign of P' at the centre.  With
    ``check`` a failed sign pattern raises CertificateFailed.
    """
    if spec.variant != PAPER or spec.d < 3:
        raise ValueError("sign certificates need variant='paper' and d >= 3")
    P = build(spec)
    dP = derivative(P)
    a_terms, b_terms = _expansion_terms(spec.d)
    s = _s_interval(spec)
    k = _grid_bits(spec)
    out = []
    for terms, side in ((a_terms, -1), (b_terms, 1)):
        e = _expansion_interval(terms, s)
        if spec.d == 3:
            w = Fraction(1, spec.M ** 3)
            lo, hi = (e.lo - w, e.hi) if side < 0 else (e.lo, e.hi + w)
        else:
            w = _half_width(spec, k)
            lo, hi = e.lo - w, e.hi + w
        lo, hi = _snap(lo, k, False), _snap(hi, k, True)
        slope = _sign(evaluate_exact(dP, (lo + hi) / 2))
        expected = (-slope, slope)
        observed = (_sign(evaluate_exact(P, lo)), _sign(evaluate_exact(P, hi)))
        out.append(SignInterval(Interval(lo, hi), expected, observed))
    cert = SignCertificate(spec, tuple(out))
    if check and not cert.passed:
        bad = [f"{x.interval}: expected {x.expected}, saw {x.observed}" for x in cert.intervals if not x.ok]
        raise CertificateFailed(f"{spec}: " + ("; ".join(bad) or "intervals do not straddle 0"))
    return cert


# ------------------------------------------------------------ verification


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class FamilyReport:
    spec: FamilySpec
    checks: tuple[CheckResult, ...]
    abssep_real: _roots.SeparationResult | None = None
    certificate: SignCertificate | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def verify_family(spec: FamilySpec, C: Fraction | int = DEFAULT_C, tol: Fraction = _roots.DEFAULT_TOL) -> FamilyReport:
    """Run every check on one family member; failures are reported, not raised."""
    if spec.variant != PAPER:
        raise ValueError("verify_family covers variant='paper' only")
    d, M = spec.d, spec.M
    P = build(spec)
    checks = [CheckResult("height", P.height() == M, f"H = {P.height()}")]
    if d >= 3:
        checks.append(CheckResult("monic", P.lead == 1, f"lead = {P.lead}"))

    cert = None
    if d >= 3:
        try:
            cert = sign_change_certificate(spec)
            checks.append(CheckResult("real_roots_certified", True, " ".join(str(x.interval) for x in cert.intervals)))
        except CertificateFailed as exc:
            checks.append(CheckResult("real_roots_certified", False, str(exc)))
    else:
        rs = _roots.isolate_roots(P)
        n_real = len(rs.real_indices())
        checks.append(CheckResult("real_roots_certified", n_real == 2, f"{n_real} real roots"))

    res = _roots.abssep_real(P, tol=tol)
    bound = Fraction(C) * Fraction(1, M ** (d - 1))
    if res.status == _roots.POSITIVE:
        ok = res.value.lo > 0 and res.value.hi < bound
        checks.append(CheckResult("abssep_scale", ok, f"{res.value} vs C*M^(-d+1) = {float(bound):.6g}"))
    else:
        checks.append(CheckResult("abssep_scale", False, f"abssep_real {res.status}"))

    rational_ok = P(1) != 0 and P(-1) != 0 and abs(P.coeffs[0]) == 1
    checks.append(CheckResult("no_rational_roots", rational_ok,
                              f"P(1) = {P(1)}, P(-1) = {P(-1)}, a_0 = {P.coeffs[0]}"))
    if d == 2:
        sq = _is_square(4 * M + 1)
        checks.append(CheckResult("irreducible_quadratic", not sq, f"4M+1 = {4 * M + 1} {'is' if sq else 'is not'} a square"))

    if res.status == _roots.POSITIVE:
        i, j = res.witness
        disks = res.roots.disks
        ok = (all(res.witness_real) and disks[i].re * disks[j].re < 0
              and all(abs(disks[k].re) > disks[k].radius for k in (i, j)))
        checks.append(CheckResult("opposite_sign_witness", ok, f"witness {res.witness}"))
    else:
        checks.append(CheckResult("opposite_sign_witness", False, "no witness"))
    return FamilyReport(spec, tuple(checks), res, cert)


# ------------------------------------------------------------ sweeps


@dataclass(frozen=True)
class SweepRow:
    d: int
    M: int
    abssep_lower: Fraction
    abssep_upper: Fraction
    ratio_to_M_pow: Fraction  # lower edge times M^(d-1)
    witness_real: tuple[bool, bool]


def sweep(d: int, m_list, variant: str = PAPER, tol: Fraction = _roots.DEFAULT_TOL) -> list[SweepRow]:
    rows = []
    for M in m_list:
        spec = FamilySpec(d, M, variant)
        res = _roots.abssep_real(build(spec), tol=tol)
        if res.status != _roots.POSITIVE:
            raise ValueError(f"abssep_real undefined for {spec}")
        scale = Fraction(M) ** (d - 1)
        rows.append(SweepRow(d, M, res.value.lo, res.value.hi, res.value.lo * scale, res.witness_real))
    return rows


THRESHOLD_CANDIDATES = (2, 3, 5, 10, 20, 50, 100, 200, 500, 1000)


def empirical_threshold(d: int, candidates=THRESHOLD_CANDIDATES) -> int | None:
    """Smallest candidate M from which verify_family passes for every larger candidate."""
    # the d = 2 square test depends on arithmetic of M, not on its size
    passing = [all(c.passed for c in verify_family(FamilySpec(d, M)).checks if c.name != "irreducible_quadratic")
               for M in candidates]
    best = None
    for M, ok in zip(reversed(candidates), reversed(passing)):
        if not ok:
            break
        best = M
    return best


def threshold_table(degrees=range(2, 9), candidates=THRESHOLD_CANDIDATES) -> dict:
    return {
        "candidates": list(candidates),
        "thresholds": {str(d): empirical_threshold(d, candidates) for d in degrees},
    }


def load_thresholds() -> dict[int, int | None]:
    """Shipped table of empirical M0(d) values (see scripts/gen_family_thresholds.py)."""
    text = resources.files("sepkit").joinpath("data/family_thresholds.json").read_text()
    return {int(k): v for k, v in json.loads(text)["thresholds"].items()}
