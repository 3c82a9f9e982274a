"""Independent reference computations used by the tests.

Nothing here imports sepkit: roots come from mpmath.polyroots at high
precision, quadratics from the closed formula, counts from brute force.
"""

from __future__ import annotations

import itertools

import mpmath


def roots_mp(coeffs, dps=60):
    """All complex roots of an ascending coefficient list, at ``dps`` digits."""
    with mpmath.workdps(dps):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        return mpmath.polyroots(list(reversed(c)), maxsteps=500, extraprec=4 * dps)


def distinct(roots, eps):
    out = []
    for r in roots:
        if all(abs(r - s) > eps for s in out):
            out.append(r)
    return out


def sep_oracle(coeffs, dps=60):
    with mpmath.workdps(dps):
        rs = distinct(roots_mp(coeffs, dps), mpmath.mpf(10) ** (-dps // 3))
        return min(abs(a - b) for a, b in itertools.combinations(rs, 2))


def abssep_oracle(coeffs, dps=60, real_only=False):
    """min ||a|-|b|| over distinct roots with moduli differing by more than 10^(-dps/3)."""
    with mpmath.workdps(dps):
        eps = mpmath.mpf(10) ** (-dps // 3)
        rs = distinct(roots_mp(coeffs, dps), eps)
        if real_only:
            rs = [r for r in rs if abs(mpmath.im(r)) < eps]
        gaps = [abs(abs(a) - abs(b)) for a, b in itertools.combinations(rs, 2)]
        gaps = [g for g in gaps if g > eps]
        return min(gaps) if gaps else None


def mahler_oracle(coeffs, dps=60):
    with mpmath.workdps(dps):
        m = abs(mpmath.mpf(coeffs[-1]))
        for r in roots_mp(coeffs, dps):
            m *= max(1, abs(r))
        return m


def quadratic_roots(a0, a1, a2, dps=60):
    with mpmath.workdps(dps):
        disc = mpmath.mpf(a1) ** 2 - 4 * mpmath.mpf(a2) * a0
        s = mpmath.sqrt(disc) if disc >= 0 else mpmath.sqrt(-disc) * 1j
        return [(-a1 + s) / (2 * a2), (-a1 - s) / (2 * a2)]


def canonical_orbit_count(max_degree, B, separable_only=False):
    """Brute-force count of {+-P(+-x)} orbits in the box, degrees 2..D."""
    seen = set()
    for d in range(2, max_degree + 1):
        for tup in itertools.product(range(-B, B + 1), repeat=d + 1):
            if tup[-1] == 0:
                continue
            if separable_only and not _separable(tup):
                continue
            orbit = []
            for sgn in (1, -1):
                for flip in (False, True):
                    orbit.append(tuple(sgn * c * ((-1) ** k if flip else 1) for k, c in enumerate(tup)))
            seen.add(min(orbit))
    return len(seen)


def _separable(tup):
    # distinct roots iff the numeric roots are pairwise apart; exact enough for tiny boxes
    rs = roots_mp(tup, 40)
    return all(abs(a - b) > mpmath.mpf(10) ** -12 for a, b in itertools.combinations(rs, 2))


def sylvester_det(p, q):
    """Resultant from a plain Sylvester matrix, with sympy-free fraction elimination."""
    from fractions import Fraction

    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(p)) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(q)) + [0] * (size - n - 1 - i))
    A = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if A[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det *= A[col][col]
        for r in range(col + 1, size):
            f = A[r][col] / A[col][col]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return int(det)
