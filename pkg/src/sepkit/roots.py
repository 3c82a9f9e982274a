"""Certified root isolation and the separation quantities built on it.

Roots are first approximated in hardware precision (Aberth-Ehrlich), then
enclosed in disks whose radii come from the inclusion bound
``min_k |c - alpha_k| <= d |P(c)| / |P'(c)|``, evaluated exactly at a dyadic
centre.  When the d disks are pairwise disjoint each holds exactly one root.
Non-real disks are built in mirrored pairs and near-real centres are snapped
onto the real axis, so a disk is real-certified exactly when its centre is
real.  Refinement is a deflated Newton step at a higher mpmath precision
followed by re-certification; the new disk must sit inside the old one.

Deciding whether two roots have the same modulus is exact.  Conjugate pairs
are recognised structurally.  For anything else the modulus-squared gap
``|a|^2 - |b|^2`` is a difference of two roots of the product polynomial
(roots alpha_i alpha_j), so it is either zero or larger than the root
separation bound of that polynomial; refining below that bound decides.
Opposite pairs a + b = 0 are decided the same way through P(x) P(-x).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath
import numpy as np

from . import _kernels
from .bounds import mahler_pair_bound
from .dyadic import Ball, Interval, abs_upper, sqrt_up
from .errors import NotSeparable, OppositeRootPair, PrecisionExhausted, UnresolvedUnitRoot
from .poly import (
    IntPolynomial,
    derivative,
    discriminant,
    has_opposite_root_pair,
    negate_argument,
    product_polynomial,
    squarefree_decomposition,
    squarefree_part,
)

DEFAULT_TOL = Fraction(1, 2**20)
DEFAULT_CEILING = 2**16
_RADIUS_BITS = 32

POSITIVE = "positive"
ZERO_CERTIFIED = "zero_certified"
UNDEFINED = "undefined"
UNDECIDED = "undecided"


def default_ceiling() -> int:
    env = os.environ.get("SEPKIT_PRECISION_CEILING")
    return int(env) if env else DEFAULT_CEILING


@dataclass(frozen=True)
class RootDisk:
    re: Fraction
    im: Fraction
    radius: Fraction
    is_real_certified: bool

    @property
    def center(self) -> complex:
        return complex(float(self.re), float(self.im))

    def ball(self) -> Ball:
        return Ball(self.re, self.im, self.radius)

    def mirror(self) -> "RootDisk":
        return RootDisk(self.re, -self.im, self.radius, self.is_real_certified)

    def contains_disk(self, other: "RootDisk") -> bool:
        slack = self.radius - other.radius
        if slack < 0:
            return False
        dr, di = self.re - other.re, self.im - other.im
        return dr * dr + di * di <= slack * slack

    def disjoint(self, other: "RootDisk") -> bool:
        dr, di = self.re - other.re, self.im - other.im
        s = self.radius + other.radius
        return dr * dr + di * di > s * s


@dataclass(frozen=True)
class RootSet:
    polynomial: IntPolynomial
    disks: tuple[RootDisk, ...]
    precision: int = 53

    def __len__(self):
        return len(self.disks)

    def __getitem__(self, i) -> RootDisk:
        return self.disks[i]

    def partner(self, i: int) -> int | None:
        """Index of the mirror disk of a non-real disk, None for real ones."""
        d = self.disks[i]
        if d.is_real_certified:
            return None
        for j, e in enumerate(self.disks):
            if j != i and e.re == d.re and e.im == -d.im:
                return j
        raise AssertionError("root set lost its conjugate symmetry")

    def real_indices(self) -> list[int]:
        return [i for i, d in enumerate(self.disks) if d.is_real_certified]


@dataclass(frozen=True)
class SeparationResult:
    status: str
    value: Interval | None = None
    witness: tuple[int, int] | None = None
    witness_real: tuple[bool, bool] | None = None
    roots: RootSet | None = None
    squarefree_substituted: bool = False
    equal_modulus_pairs: int = 0
    precision: int = 53
    note: str = ""

    @property
    def lower(self) -> Fraction | None:
        return None if self.value is None else self.value.lo

    @property
    def upper(self) -> Fraction | None:
        return None if self.value is None else self.value.hi


@dataclass(frozen=True)
class AbsEqualDecision:
    equal: bool
    gap: Interval | None = None
    reason: str = ""


# ------------------------------------------------------------ exact kernels


def _gauss_horner(coeffs, X: int, Y: int, D: int) -> tuple[int, int]:
    """D^n P((X + iY)/D) as (real, imag) integers, n = len(coeffs) - 1."""
    R, I = coeffs[-1], 0
    Dp = 1
    if Y == 0:
        for a in reversed(coeffs[:-1]):
            Dp *= D
            R = R * X + a * Dp
        return R, 0
    for a in reversed(coeffs[:-1]):
        Dp *= D
        R, I = R * X - I * Y + a * Dp, R * Y + I * X
    return R, I


def inclusion_radius(P: IntPolynomial, dP: IntPolynomial, re: Fraction, im: Fraction) -> Fraction | None:
    """Upper bound of d |P(c)| / |P'(c)| at c = re + i im (None if P'(c) = 0)."""
    d = P.degree()
    D = math.lcm(re.denominator, im.denominator)
    X = re.numerator * (D // re.denominator)
    Y = im.numerator * (D // im.denominator)
    pr, pi = _gauss_horner(P.coeffs, X, Y, D)
    if pr == 0 and pi == 0:
        return Fraction(0)
    qr, qi = _gauss_horner(dP.coeffs, X, Y, D)
    den = (qr * qr + qi * qi) * D * D
    if den == 0:
        return None
    return sqrt_up(Fraction(d * d * (pr * pr + pi * pi), den), _RADIUS_BITS)


def _mpf_to_fraction(x) -> Fraction:
    p, q = mpmath.libmp.to_rational(mpmath.mpf(x)._mpf_)
    return Fraction(p, q)


def _fraction_to_mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _bits(q: Fraction) -> int:
    """Rough log2 of a positive rational."""
    return q.numerator.bit_length() - q.denominator.bit_length()


def _float_coeffs_ok(P: IntPolynomial) -> bool:
    return all(abs(c) < 2**1000 for c in P.coeffs)


# ------------------------------------------------------------ approximation


def _approx_float(P: IntPolynomial) -> list[tuple[Fraction, Fraction]] | None:
    if not _float_coeffs_ok(P):
        return None
    z, ok = _kernels.aberth_roots(np.array([P.coeffs], dtype=np.float64))
    z = z[0]
    if not np.all(np.isfinite(z)):
        return None
    return [(Fraction(float(w.real)), Fraction(float(w.imag))) for w in z]


def _approx_mp(P: IntPolynomial, start, prec: int, maxiter: int = 200):
    with mpmath.workprec(prec):
        c = [mpmath.mpf(a) for a in P.coeffs]
        d = len(c) - 1
        if start is None:
            H = max(abs(a) for a in P.coeffs[:-1])
            R = 1 + mpmath.mpf(H) / abs(c[-1])
            z = [R * mpmath.expjpi(mpmath.mpf(2 * k) / d + mpmath.mpf(0.4) / mpmath.pi) for k in range(d)]
        else:
            z = [mpmath.mpc(_fraction_to_mpf(a), _fraction_to_mpf(b)) for a, b in start]
        eps = mpmath.ldexp(1, -prec + 8)
        for _ in range(maxiter):
            maxcorr = 0
            for k in range(d):
                zk = z[k]
                p = c[d]
                dp = mpmath.mpc(0)
                for j in range(d - 1, -1, -1):
                    dp = dp * zk + p
                    p = p * zk + c[j]
                if p == 0:
                    continue
                if dp == 0:
                    z[k] = zk * (1 + eps) + eps
                    maxcorr = 1
                    continue
                ratio = p / dp
                s = mpmath.mpc(0)
                for j in range(d):
                    if j != k and z[j] != zk:
                        s += 1 / (zk - z[j])
                den = 1 - ratio * s
                w = ratio if den == 0 else ratio / den
                z[k] = zk - w
                corr = abs(w) / max(1, abs(z[k]))
                if corr > maxcorr:
                    maxcorr = corr
            if maxcorr < eps:
                break
        return [(_mpf_to_fraction(mpmath.re(w)), _mpf_to_fraction(mpmath.im(w))) for w in z]


def _build_disks(P, dP, approx) -> list[RootDisk] | None:
    reals, upper, lower = [], [], []
    for re, im in approx:
        if im != 0:
            r_here = inclusion_radius(P, dP, re, im)
            if r_here is None:
                return None
            if abs(im) > r_here:
                (upper if im > 0 else lower).append((re, im))
                continue
        rr = inclusion_radius(P, dP, re, Fraction(0))
        if rr is None:
            return None
        reals.append(RootDisk(re, Fraction(0), rr, True))
    if len(upper) != len(lower):
        return None
    disks = list(reals)
    lower = list(lower)
    for re, im in upper:
        k = min(range(len(lower)), key=lambda t: (re - lower[t][0]) ** 2 + (im + lower[t][1]) ** 2)
        lre, lim = lower.pop(k)
        cre, cim = (re + lre) / 2, (im - lim) / 2
        r = inclusion_radius(P, dP, cre, cim)
        if r is None or cim <= 0:
            return None
        disks.append(RootDisk(cre, cim, r, False))
        disks.append(RootDisk(cre, -cim, r, False))
    fl = [(complex(float(e.re), float(e.im)), float(e.radius)) for e in disks]
    for a in range(len(disks)):
        for b in range(a + 1, len(disks)):
            (za, ra), (zb, rb) = fl[a], fl[b]
            gap = abs(za - zb) - 1e-12 * (abs(za) + abs(zb))
            if gap > 0 and gap > 1.000001 * (ra + rb):
                continue
            if not disks[a].disjoint(disks[b]):
                return None
    disks.sort(key=lambda e: (e.re, e.im))
    return disks


class _Workspace:
    """Mutable refinement state behind the immutable RootSet."""

    def __init__(self, P: IntPolynomial, disks: list[RootDisk], prec: int, ceiling: int):
        self.P = P
        self.dP = derivative(P)
        self.disks = disks
        self.prec = prec
        self.ceiling = ceiling
        self.partner: list[int | None] = [None] * len(disks)
        index = {(e.re, e.im): i for i, e in enumerate(disks)}
        for i, e in enumerate(disks):
            if not e.is_real_certified:
                self.partner[i] = index[(e.re, -e.im)]
        self._cache: dict = {}

    # construction -----------------------------------------------------

    @classmethod
    def isolate(cls, P: IntPolynomial, ceiling: int) -> "_Workspace":
        d = P.degree()
        dP = derivative(P)
        if d == 1:
            root = Fraction(-P.coeffs[0], P.coeffs[1])
            return cls(P, [RootDisk(root, Fraction(0), Fraction(0), True)], 53, ceiling)
        approx = _approx_float(P)
        prec = 53
        while True:
            if approx is not None:
                disks = _build_disks(P, dP, approx)
                if disks is not None:
                    return cls(P, disks, prec, ceiling)
            prec *= 2
            if prec > ceiling:
                raise PrecisionExhausted(f"root isolation needs more than {ceiling} bits")
            approx = _approx_mp(P, approx, prec)

    @classmethod
    def from_rootset(cls, rs: RootSet, ceiling: int | None = None) -> "_Workspace":
        return cls(rs.polynomial, list(rs.disks), rs.precision, ceiling or default_ceiling())

    def freeze(self) -> RootSet:
        return RootSet(self.P, tuple(self.disks), self.prec)

    # refinement -------------------------------------------------------

    def refine(self, i: int, target: Fraction):
        disk = self.disks[i]
        if disk.radius <= target:
            return
        j = self.partner[i]
        if j is not None and disk.im < 0:
            self.refine(j, target)
            return
        self.disks[i] = self._refine_disk(i, disk, target)
        if j is not None:
            self.disks[j] = self.disks[i].mirror()

    def _refine_disk(self, i: int, disk: RootDisk, target: Fraction) -> RootDisk:
        P, dP = self.P, self.dP
        scale = max(abs(disk.re) + abs(disk.im), Fraction(1))
        prec = max(self.prec, _bits(scale / target) + 32, 64)
        best = disk
        while True:
            if prec > self.ceiling:
                raise PrecisionExhausted(f"refinement needs more than {self.ceiling} bits")
            re, im = self._newton(i, best, prec, target)
            if disk.is_real_certified:
                im = Fraction(0)
            r = inclusion_radius(P, dP, re, im)
            if r is not None:
                cand = RootDisk(re, im, r, disk.is_real_certified)
                if best.contains_disk(cand):
                    best = cand
                    if r <= target:
                        self.prec = max(self.prec, prec)
                        return best
            prec *= 2

    def _newton(self, i: int, disk: RootDisk, prec: int, target: Fraction):
        """Deflated Newton (Aberth correction) towards the root in ``disk``."""
        with mpmath.workprec(prec):
            c = [mpmath.mpf(a) for a in self.P.coeffs]
            d = len(c) - 1
            others = [
                mpmath.mpc(_fraction_to_mpf(e.re), _fraction_to_mpf(e.im))
                for k, e in enumerate(self.disks)
                if k != i
            ]
            if disk.is_real_certified:
                z = mpmath.mpf(_fraction_to_mpf(disk.re))
            else:
                z = mpmath.mpc(_fraction_to_mpf(disk.re), _fraction_to_mpf(disk.im))
            stop = _fraction_to_mpf(target) / 64
            floor = mpmath.ldexp(1, -prec + 4) * max(1, abs(z))
            for _ in range(100):
                p = c[d]
                dp = 0
                for j in range(d - 1, -1, -1):
                    dp = dp * z + p
                    p = p * z + c[j]
                if p == 0 or dp == 0:
                    break
                ratio = p / dp
                s = 0
                for o in others:
                    if o != z:
                        s += 1 / (z - o)
                if disk.is_real_certified:
                    s = mpmath.re(s)
                w = ratio / (1 - ratio * s)
                z = z - w
                if abs(w) <= stop or abs(w) <= floor:
                    break
            return _mpf_to_fraction(mpmath.re(z)), _mpf_to_fraction(mpmath.im(z))

    def refine_all(self, target: Fraction):
        for i in range(len(self.disks)):
            self.refine(i, target)

    # enclosures --------------------------------------------------------

    def _sqrt_prec(self, *idx) -> int:
        bits = 64
        for i in idx:
            e = self.disks[i]
            scale = max(abs(e.re) + abs(e.im), Fraction(1))
            if e.radius:
                bits = max(bits, _bits(scale / e.radius) + 24)
            else:
                bits = max(bits, 2 * self.prec + 64)
        return bits

    def ball(self, i: int) -> Ball:
        return self.disks[i].ball()

    def modulus(self, i: int) -> Interval:
        return self.disks[i].ball().abs(self._sqrt_prec(i))

    def modulus_sq(self, i: int) -> Interval:
        e = self.disks[i]
        n = e.re * e.re + e.im * e.im
        if not e.radius:
            return Interval.point(n)
        err = 2 * abs_upper(e.re, e.im) * e.radius + e.radius * e.radius
        return Interval(max(Fraction(0), n - err), n + err)

    def diff_abs(self, i: int, j: int) -> Interval:
        return (self.ball(i) - self.ball(j)).abs(self._sqrt_prec(i, j))

    def sum_abs(self, i: int, j: int) -> Interval:
        return (self.ball(i) + self.ball(j)).abs(self._sqrt_prec(i, j))

    def modulus_gap(self, i: int, j: int) -> Interval:
        return (self.modulus(i) - self.modulus(j)).abs()

    # exact decisions ---------------------------------------------------

    def _zero_root(self) -> int | None:
        if self.P.coeffs[0] != 0:
            return None
        if "zero" not in self._cache:
            self._cache["zero"] = next(i for i, e in enumerate(self.disks) if e.ball().contains(0, 0))
        return self._cache["zero"]

    def opposite_possible(self) -> bool:
        if "opp" not in self._cache:
            self._cache["opp"] = has_opposite_root_pair(self.P)
        return self._cache["opp"]

    def _threshold(self, key: str, build) -> Fraction | None:
        if key not in self._cache:
            S = squarefree_part(build())
            self._cache[key] = None if S.degree() < 2 else mahler_pair_bound(S.degree(), S.height())
        return self._cache[key]

    def _drive(self, idx, quantity, threshold: Fraction | None):
        """Refine until ``quantity()`` excludes 0 (False) or drops below threshold (True)."""
        if threshold is None:
            return True
        while True:
            q = quantity()
            if q.lo > 0:
                return False
            if q.hi < threshold:
                return True
            width = max(self.disks[k].radius for k in idx)
            target = max(threshold / 64, width / 2**32)
            scale = max(max(abs(self.disks[k].re) + abs(self.disks[k].im) for k in idx), Fraction(1))
            target = target / (4 * scale)
            for k in idx:
                self.refine(k, target)

    def is_opposite_pair(self, i: int, j: int) -> bool:
        """Exact test of alpha_i + alpha_j = 0."""
        if not self.opposite_possible():
            return False
        thr = self._threshold("opp_thr", lambda: self.P * negate_argument(self.P))
        return self._drive((i, j), lambda: self.sum_abs(i, j), thr)

    def equal_modulus(self, i: int, j: int) -> tuple[bool, str]:
        if i == j:
            return True, "same root"
        if self.partner[i] == j:
            return True, "conjugate"
        z = self._zero_root()
        if z is not None and z in (i, j):
            return False, "zero root"
        if self.disks[i].is_real_certified and self.disks[j].is_real_certified:
            if self.is_opposite_pair(i, j):
                return True, "opposite"
            return False, "real pair, not opposite"
        if self.opposite_possible() and self.sum_abs(i, j).contains_zero():
            if self.is_opposite_pair(i, j):
                return True, "opposite"

        def build():
            Q = self.P.deflate_zero()[0]
            return product_polynomial(Q)

        thr = self._threshold("prod_thr", build)
        eq = self._drive((i, j), lambda: (self.modulus_sq(i) - self.modulus_sq(j)).abs(), thr)
        return eq, "product polynomial threshold"

    def modulus_vs_one(self, i: int) -> int:
        """Sign of |alpha_i| - 1, decided exactly (0 means |alpha_i| = 1)."""
        m = self.modulus_sq(i)
        if m.lo > 1:
            return 1
        if m.hi < 1:
            return -1
        if self.disks[i].is_real_certified:
            if self.P(1) == 0 and self.disks[i].ball().contains(1):
                return 0
            if self.P(-1) == 0 and self.disks[i].ball().contains(-1):
                return 0
        if self.P.coeffs[0] == 0 and self._zero_root() == i:
            return -1

        def build():
            Q = self.P.deflate_zero()[0]
            return product_polynomial(Q) * IntPolynomial([-1, 1])

        thr = self._threshold("unit_thr", build)
        try:
            eq = self._drive((i,), lambda: (self.modulus_sq(i) - 1).abs(), thr)
        except PrecisionExhausted as exc:
            raise UnresolvedUnitRoot(str(exc)) from exc
        if eq:
            return 0
        return 1 if self.modulus_sq(i).lo > 1 else -1

    # minimisation ------------------------------------------------------

    def _float_lower(self, kind: str, i: int, j: int) -> float:
        """Generous floating-point lower bound, only used to discard pairs."""
        a, b = self.disks[i], self.disks[j]
        za, zb = complex(float(a.re), float(a.im)), complex(float(b.re), float(b.im))
        if kind == "diff":
            v = abs(za - zb)
        elif kind == "sum":
            v = abs(za + zb)
        else:
            v = abs(abs(za) - abs(zb))
        slack = (float(a.radius) + float(b.radius)) * 1.000001 + 1e-12 * (abs(za) + abs(zb))
        return v - slack

    def minimise(self, pairs, kind: str, tol: Fraction):
        """Enclose the minimum of ``kind`` over ``pairs`` to relative width tol.

        A pair whose value provably exceeds the current best upper edge can
        never be the minimiser, so it is dropped for good; disks only shrink.
        """
        fn = {"diff": self.diff_abs, "sum": self.sum_abs, "gap": self.modulus_gap}[kind]
        pairs = list(pairs)
        cache: dict = {}

        def interval(p):
            key = (self.disks[p[0]], self.disks[p[1]])
            if cache.get(p, (None,))[0] != key:
                cache[p] = (key, fn(*p))
            return cache[p][1]

        while True:
            est = {p: self._float_lower(kind, *p) for p in pairs}
            first = min(pairs, key=lambda p: (est[p], p))
            best_hi = interval(first).hi
            pairs = [p for p in pairs if p == first or est[p] <= float(best_hi)]
            ivs = [(interval(p), p) for p in pairs]
            lo = min(iv.lo for iv, _ in ivs)
            hi = min(iv.hi for iv, _ in ivs)
            pairs = [p for iv, p in ivs if iv.lo <= hi]
            ivs = [(iv, p) for iv, p in ivs if iv.lo <= hi]
            if lo > 0 and hi - lo <= tol * lo:
                witness = min(ivs, key=lambda t: (t[0].hi, t[0].lo, t[1]))[1]
                return Interval(lo, hi), witness
            if hi == 0:
                raise AssertionError("admissible pair with zero value")
            target = tol * hi / 8
            for k in sorted({k for p in pairs for k in p}):
                e = self.disks[k]
                self.refine(k, min(target, e.radius / 2) if e.radius else target)


# ---------------------------------------------------------------- public API


def _workspace(P: IntPolynomial, roots: RootSet | None, ceiling: int | None) -> _Workspace:
    ceiling = ceiling or default_ceiling()
    if roots is not None:
        if roots.polynomial != P:
            raise ValueError("root set belongs to a different polynomial")
        return _Workspace.from_rootset(roots, ceiling)
    return _Workspace.isolate(P, ceiling)


def isolate_roots(P: IntPolynomial, target_radius: Fraction | None = None, ceiling: int | None = None,
                  check_separable: bool = True) -> RootSet:
    """Disjoint certified disks, one per root of the separable polynomial P."""
    d = P.degree()
    if d < 1:
        raise ValueError("root isolation needs degree >= 1")
    if check_separable and d >= 2 and discriminant(P) == 0:
        raise NotSeparable(f"{P} has a multiple root; use squarefree_part first")
    ws = _Workspace.isolate(P, ceiling or default_ceiling())
    if target_radius is not None:
        ws.refine_all(Fraction(target_radius))
    return ws.freeze()


def refine(P: IntPolynomial, roots: RootSet, target_radius: Fraction, ceiling: int | None = None) -> RootSet:
    """Shrink every disk of ``roots`` to radius <= target_radius."""
    ws = _workspace(P, roots, ceiling)
    ws.refine_all(Fraction(target_radius))
    return ws.freeze()


def _prepare(P: IntPolynomial):
    if P.is_zero or P.degree() < 2:
        return None, False
    Q = squarefree_part(P)
    return Q, Q.coeffs != P.primitive().coeffs


def _result(ws: _Workspace, value, witness, substituted, equal=0) -> SeparationResult:
    i, j = witness
    return SeparationResult(
        status=POSITIVE,
        value=value,
        witness=witness,
        witness_real=(ws.disks[i].is_real_certified, ws.disks[j].is_real_certified),
        roots=ws.freeze(),
        squarefree_substituted=substituted,
        equal_modulus_pairs=equal,
        precision=ws.prec,
    )


def sep(P: IntPolynomial, tol: Fraction = DEFAULT_TOL, ceiling: int | None = None,
        roots: RootSet | None = None) -> SeparationResult:
    """Enclosure of min |alpha - beta| over distinct roots of P.

    P is replaced by its squarefree part, which has the same root set.
    The enclosure's width is at most ``tol`` times its lower end.  ``roots``
    may carry disks from an earlier result (``result.roots``) to skip
    isolation.
    """
    Q, substituted = _prepare(P)
    if Q is None or Q.degree() < 2:
        return SeparationResult(UNDEFINED, squarefree_substituted=substituted, note="fewer than two distinct roots")
    ws = _workspace(Q, roots, ceiling)
    n = len(ws.disks)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    value, witness = ws.minimise(pairs, "diff", Fraction(tol))
    return _result(ws, value, witness, substituted)


def _abssep(P: IntPolynomial, tol, ceiling, real_only: bool, roots=None) -> SeparationResult:
    Q, substituted = _prepare(P)
    if Q is None or Q.degree() < 2:
        return SeparationResult(UNDEFINED, squarefree_substituted=substituted, note="fewer than two distinct roots")
    ws = _workspace(Q, roots, ceiling)
    n = len(ws.disks)
    idx = [i for i in range(n) if ws.disks[i].is_real_certified] if real_only else list(range(n))
    if len(idx) < 2:
        return SeparationResult(UNDEFINED, roots=ws.freeze(), squarefree_substituted=substituted,
                                note="fewer than two real roots" if real_only else "")
    admissible, equal = [], 0
    for a, i in enumerate(idx):
        for j in idx[a + 1:]:
            if ws.partner[i] == j:
                equal += 1
                continue
            if ws._float_lower("gap", i, j) > 0 or ws.modulus_gap(i, j).lo > 0:
                admissible.append((i, j))
                continue
            eq, _ = ws.equal_modulus(i, j)
            if eq:
                equal += 1
            else:
                admissible.append((i, j))
    if not admissible:
        return SeparationResult(UNDEFINED, roots=ws.freeze(), squarefree_substituted=substituted,
                                equal_modulus_pairs=equal, note="all pairs have equal moduli")
    value, witness = ws.minimise(admissible, "gap", Fraction(tol))
    return _result(ws, value, witness, substituted, equal)


def abssep(P: IntPolynomial, tol: Fraction = DEFAULT_TOL, ceiling: int | None = None,
           roots: RootSet | None = None) -> SeparationResult:
    """Enclosure of min ||alpha| - |beta|| over roots with distinct moduli."""
    return _abssep(P, tol, ceiling, False, roots)


def abssep_real(P: IntPolynomial, tol: Fraction = DEFAULT_TOL, ceiling: int | None = None,
                roots: RootSet | None = None) -> SeparationResult:
    """Same as :func:`abssep` restricted to pairs of real roots."""
    return _abssep(P, tol, ceiling, True, roots)


def decide_abs_equal(P: IntPolynomial, i: int, j: int, roots: RootSet, ceiling: int | None = None) -> AbsEqualDecision:
    """Exact decision of |alpha_i| = |alpha_j|; a gap enclosure when distinct."""
    if i == j:
        raise ValueError("need two distinct root indices")
    ws = _workspace(P, roots, ceiling)
    eq, reason = ws.equal_modulus(i, j)
    if eq:
        return AbsEqualDecision(True, None, reason)
    while True:
        gap = ws.modulus_gap(i, j)
        if gap.lo > 0:
            return AbsEqualDecision(False, gap, reason)
        target = gap.hi / 16
        ws.refine(i, target)
        ws.refine(j, target)


def min_pairwise_sum(P: IntPolynomial, tol: Fraction = DEFAULT_TOL, ceiling: int | None = None,
                     roots: RootSet | None = None) -> SeparationResult:
    """Enclosure of min_{i<j} |alpha_i + alpha_j|; refuses opposite pairs."""
    Q, substituted = _prepare(P)
    if Q is None or Q.degree() < 2:
        return SeparationResult(UNDEFINED, squarefree_substituted=substituted, note="fewer than two distinct roots")
    if has_opposite_root_pair(Q):
        raise OppositeRootPair(f"{P} has two roots summing to zero")
    ws = _workspace(Q, roots, ceiling)
    n = len(ws.disks)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    value, witness = ws.minimise(pairs, "sum", Fraction(tol))
    return _result(ws, value, witness, substituted)


def modulus_vs_one(P: IntPolynomial, i: int, roots: RootSet, ceiling: int | None = None) -> int:
    ws = _workspace(P, roots, ceiling)
    return ws.modulus_vs_one(i)


def mahler_measure(P: IntPolynomial, roots: RootSet | None = None, tol: Fraction = DEFAULT_TOL,
                   ceiling: int | None = None) -> Interval:
    """Enclosure of |a_d| prod max{1, |alpha_i|}, roots counted with multiplicity.

    ``roots`` may be supplied when P is separable; otherwise P is split into
    squarefree factors and each factor is isolated separately.
    """
    if P.is_zero:
        raise ValueError("Mahler measure of the zero polynomial")
    lead = abs(P.lead)
    if P.degree() == 0:
        return Interval.point(lead)
    if roots is not None:
        factors = [(_workspace(P, roots, ceiling), 1)]
    else:
        factors = [(_Workspace.isolate(f, ceiling or default_ceiling()), k)
                   for f, k in squarefree_decomposition(P)]
    tol = Fraction(tol)
    big = []
    for ws, k in factors:
        for i in range(len(ws.disks)):
            if ws.modulus_vs_one(i) > 0:
                big.append((ws, i, k))
    while True:
        acc = Interval.point(lead)
        for ws, i, k in big:
            acc = acc * ws.modulus(i) ** k
        if acc.width <= tol * acc.lo:
            return acc
        n = sum(k for _, _, k in big)
        for ws, i, k in big:
            m = ws.modulus(i)
            ws.refine(i, tol * m.lo / (8 * n))
