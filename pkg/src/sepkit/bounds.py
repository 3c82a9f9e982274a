"""Lower bounds on root separation and upper bounds on the Mahler measure.

Each bound is the square root of an exact rational, so directed rounding is
done with integer square roots: lower bounds round down, upper bounds round
up, at ``prec`` significant bits.  Halving or doubling ``prec`` moves an
emitted value only towards the exact one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .dyadic import Interval, sqrt_down, sqrt_up
from .poly import IntPolynomial

DEFAULT_PREC = 128


def _check_dh(d: int, H: int, min_d: int):
    if d < min_d:
        raise ValueError(f"degree must be >= {min_d}, got {d}")
    if H < 1:
        raise ValueError(f"height must be >= 1, got {H}")


def mahler_pair_bound(d: int, H: int, maxmod: Fraction | int = 1, prec: int = DEFAULT_PREC) -> Fraction:
    """sqrt(3) (d+1)^(-(2d+1)/2) max{1,|a|,|b|} H^(-d+1), rounded down.

    Lower bound for |a - b| over two distinct roots of a separable integer
    polynomial of degree d and height H.  ``maxmod`` must be a lower bound
    of max{1, |a|, |b|}; values below 1 are replaced by 1.
    """
    _check_dh(d, H, 2)
    m = max(Fraction(maxmod), Fraction(1))
    sq = Fraction(3) * m * m / (Fraction(d + 1) ** (2 * d + 1) * Fraction(H) ** (2 * d - 2))
    return sqrt_down(sq, prec)


def thm1_squared(d: int, H: int) -> Fraction:
    return Fraction(2) ** (2 - d * d) / (Fraction(d + 1) ** (d - 1) * Fraction(H) ** (2 * d - 2))


def thm1_bound(d: int, H: int, prec: int = DEFAULT_PREC) -> Fraction:
    """2^((-d^2+2)/2) (d+1)^((-d+1)/2) H^(-d+1), rounded down.

    Lower bound for ||a| - |b|| over two real roots of a separable
    polynomial with no pair of roots summing to zero.
    """
    _check_dh(d, H, 2)
    return sqrt_down(thm1_squared(d, H), prec)


def thm2_bound(d: int, H: int, prec: int = DEFAULT_PREC) -> Fraction:
    """2^(-3d^2/2+3d-1) d^((-d+2)/2) H^(-d+2), rounded down.

    Applies to irrational real roots of reducible polynomials, which forces
    d >= 4; smaller degrees are refused.
    """
    _check_dh(d, H, 4)
    sq = Fraction(2) ** (-3 * d * d + 6 * d - 2) / (Fraction(d) ** (d - 2) * Fraction(H) ** (2 * d - 4))
    return sqrt_down(sq, prec)


def gs_abssep_exponent(d: int) -> Fraction:
    """Exponent -d(d^2+2d-1)/2 of H in the general abssep lower bound.

    Only the exponent is known; the constant in front is not explicit, so
    this never certifies anything on its own.
    """
    if d < 2:
        raise ValueError("degree must be >= 2")
    return Fraction(-d * (d * d + 2 * d - 1), 2)


def landau_upper(P: IntPolynomial, prec: int = DEFAULT_PREC) -> Fraction:
    """Euclidean norm of the coefficient vector, rounded up (>= M(P))."""
    if P.is_zero:
        raise ValueError("Landau bound of the zero polynomial")
    return sqrt_up(sum(c * c for c in P.coeffs), prec)


def landau_generic_upper(d: int, H: int, prec: int = DEFAULT_PREC) -> Fraction:
    """sqrt(d+1) H rounded up: dominates landau_upper for every P of degree d, height H."""
    return sqrt_up(Fraction((d + 1) * H * H), prec)


def gelfond_factor_height_bound(d: int, H: int) -> int:
    """2^d H: no factor of a degree-d polynomial of height H is higher."""
    if d < 1 or H < 1:
        raise ValueError("need d >= 1 and H >= 1")
    return (1 << d) * H


def mahler_measure_enclosure(P: IntPolynomial, roots=None, tol: Fraction = Fraction(1, 2**20),
                             ceiling: int | None = None) -> Interval:
    """Interval containing |a_d| prod max{1, |alpha_i|}.

    Roots straddling the unit circle are refined; a root whose modulus is
    exactly 1 is recognised exactly (see :func:`sepkit.roots.modulus_vs_one`).
    ``tol`` bounds the relative width of the result.
    """
    from . import roots as _roots

    return _roots.mahler_measure(P, roots, tol=tol, ceiling=ceiling)


@dataclass(frozen=True)
class BoundReport:
    degree: int
    height: int
    mahler_pair: Fraction
    thm1: Fraction
    thm2: Fraction | None
    gs_exponent: Fraction
    landau_upper: Fraction
    gelfond_factor_height: int
    precision: int = DEFAULT_PREC
    maxmod: Fraction = Fraction(1)
    gs_certifying: bool = field(default=False)


def bound_report(d: int, H: int, maxmod: Fraction | int = 1, prec: int = DEFAULT_PREC,
                 P: IntPolynomial | None = None) -> BoundReport:
    """Every bound for one (degree, height) pair.

    ``landau_upper`` is sqrt(sum a_k^2) when ``P`` is given and the generic
    sqrt(d+1) H otherwise.
    """
    _check_dh(d, H, 2)
    lu = landau_upper(P, prec) if P is not None else landau_generic_upper(d, H, prec)
    return BoundReport(
        degree=d,
        height=H,
        mahler_pair=mahler_pair_bound(d, H, maxmod, prec),
        thm1=thm1_bound(d, H, prec),
        thm2=thm2_bound(d, H, prec) if d >= 4 else None,
        gs_exponent=gs_abssep_exponent(d),
        landau_upper=lu,
        gelfond_factor_height=gelfond_factor_height_bound(d, H),
        precision=prec,
        maxmod=max(Fraction(maxmod), Fraction(1)),
    )


__all__ = [
    "BoundReport",
    "bound_report",
    "gelfond_factor_height_bound",
    "gs_abssep_exponent",
    "landau_generic_upper",
    "landau_upper",
    "mahler_measure_enclosure",
    "mahler_pair_bound",
    "thm1_bound",
    "thm2_bound",
]
