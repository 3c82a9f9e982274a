"""Hardware-precision batch kernels: Aberth-Ehrlich roots and screening metrics.

Two implementations share one interface.  The numba path compiles per-row
loops with ``@njit``; the numpy path vectorises the same iteration across the
batch.  ``SEPKIT_BACKEND=numpy`` (or a missing numba) selects the fallback.
Nothing computed here is certified; callers treat the output as a screen.
"""

from __future__ import annotations

import os

import numpy as np

METRIC_SEP = 0
METRIC_ABSSEP = 1

# relative thresholds below which a float result is not trusted
NEAR_EQUAL = 1e-7
NEAR_REAL = 1e-6
# a pair is also flagged when the root error estimates reach this share of its gap
UNSURE = 0.25
EPS = 2.0**-52

_requested = os.environ.get("SEPKIT_BACKEND", "numba").strip().lower()
njit = None
if _requested != "numpy":
    try:
        from numba import njit  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - depends on the environment
        njit = None

BACKEND = "numba" if njit is not None else "numpy"


def initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Points on a circle of radius 1 + H/|a_d|, slightly rotated."""
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=np.float64))
    d = coeffs.shape[1] - 1
    H = np.abs(coeffs[:, :-1]).max(axis=1)
    R = 1.0 + H / np.abs(coeffs[:, -1])
    ang = 2.0 * np.pi * np.arange(d) / d + 0.4
    return R[:, None] * np.exp(1j * ang)[None, :]


# ---------------------------------------------------------------- numpy path


def _aberth_numpy(coeffs: np.ndarray, maxiter: int, tol: float):
    N, n1 = coeffs.shape
    d = n1 - 1
    z = initial_guesses(coeffs)
    active = np.ones(N, dtype=bool)
    eye = np.eye(d, dtype=bool)
    for _ in range(maxiter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        zz = z[idx]
        c = coeffs[idx]
        p = np.repeat(c[:, d : d + 1].astype(np.complex128), d, axis=1)
        dp = np.zeros_like(zz)
        for j in range(d - 1, -1, -1):
            dp = dp * zz + p
            p = p * zz + c[:, j : j + 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(p == 0, 0.0, p / dp)
            diff = zz[:, :, None] - zz[:, None, :]
            diff[:, eye] = 1.0
            inv = 1.0 / diff
            inv[:, eye] = 0.0
            s = inv.sum(axis=2)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0.0)
        zz = zz - w
        z[idx] = zz
        corr = (np.abs(w) / np.maximum(1.0, np.abs(zz))).max(axis=1)
        done = corr < tol
        active[idx[done]] = False
    return z, ~active


def _radii_numpy(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Float estimate of d |P(z)| / |P'(z)| per root, padded for rounding."""
    d = coeffs.shape[1] - 1
    p = np.repeat(coeffs[:, d : d + 1].astype(np.complex128), d, axis=1)
    dp = np.zeros_like(z)
    mag = np.repeat(np.abs(coeffs[:, d : d + 1]), d, axis=1)
    az = np.abs(z)
    for j in range(d - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[:, j : j + 1]
        mag = mag * az + np.abs(coeffs[:, j : j + 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        r = d * (np.abs(p) + 4 * d * EPS * mag) / np.abs(dp)
    return np.where(np.isfinite(r), r, np.inf)


def _metric_numpy(coeffs: np.ndarray, z: np.ndarray, metric: int):
    N, d = z.shape
    if d < 2:
        return np.full(N, np.inf), np.zeros(N, dtype=bool)
    r = _radii_numpy(coeffs, z)
    iu, ju = np.triu_indices(d, 1)
    zi, zj = z[:, iu], z[:, ju]
    unsure = r[:, iu] + r[:, ju]
    scale = np.maximum(1.0, np.maximum(np.abs(zi), np.abs(zj)))
    if metric == METRIC_SEP:
        gap = np.abs(zi - zj)
        flag = ((gap < NEAR_REAL * scale) | (unsure >= UNSURE * gap)).any(axis=1)
        return gap.min(axis=1), flag
    gap = np.abs(np.abs(zi) - np.abs(zj))
    conj = (np.abs(zi.imag) > NEAR_REAL * scale) & (
        np.abs(zi - np.conj(zj)) < NEAR_REAL * scale
    )
    near = ((gap < NEAR_EQUAL * scale) | (unsure >= UNSURE * gap)) & ~conj
    gap = np.where(conj | near, np.inf, gap)
    return gap.min(axis=1), near.any(axis=1)


# ---------------------------------------------------------------- numba path

if njit is not None:

    @njit(cache=True)
    def _aberth_row(c, z, maxiter, tol):
        d = c.shape[0] - 1
        for _ in range(maxiter):
            maxcorr = 0.0
            for k in range(d):
                zk = z[k]
                p = complex(c[d])
                dp = 0j
                for j in range(d - 1, -1, -1):
                    dp = dp * zk + p
                    p = p * zk + c[j]
                if p == 0:
                    continue
                if dp == 0:
                    z[k] = zk * (1.0 + 1e-8) + 1e-12
                    maxcorr = 1.0
                    continue
                ratio = p / dp
                s = 0j
                for j in range(d):
                    if j != k:
                        dz = zk - z[j]
                        if dz != 0:
                            s += 1.0 / dz
                den = 1.0 - ratio * s
                w = ratio if den == 0 else ratio / den
                z[k] = zk - w
                a = abs(z[k])
                corr = abs(w) / (a if a > 1.0 else 1.0)
                if corr > maxcorr:
                    maxcorr = corr
            if maxcorr < tol:
                return True
        return False

    @njit(cache=True)
    def _aberth_batch_nb(coeffs, z, maxiter, tol, ok):
        for i in range(coeffs.shape[0]):
            ok[i] = _aberth_row(coeffs[i], z[i], maxiter, tol)

    @njit(cache=True)
    def _radius_nb(c, zk):
        d = c.shape[0] - 1
        p = complex(c[d])
        dp = 0j
        mag = abs(c[d])
        az = abs(zk)
        for j in range(d - 1, -1, -1):
            dp = dp * zk + p
            p = p * zk + c[j]
            mag = mag * az + abs(c[j])
        if dp == 0:
            return np.inf
        return d * (abs(p) + 4 * d * EPS * mag) / abs(dp)

    @njit(cache=True)
    def _metric_batch_nb(coeffs, z, metric, out, flag):
        N, d = z.shape
        r = np.empty(d)
        for n in range(N):
            for k in range(d):
                r[k] = _radius_nb(coeffs[n], z[n, k])
            best = np.inf
            f = False
            for i in range(d):
                for j in range(i + 1, d):
                    ai = abs(z[n, i])
                    aj = abs(z[n, j])
                    scale = max(1.0, max(ai, aj))
                    unsure = r[i] + r[j]
                    if metric == 0:
                        g = abs(z[n, i] - z[n, j])
                        if g < NEAR_REAL * scale or unsure >= UNSURE * g:
                            f = True
                        if g < best:
                            best = g
                    else:
                        conj = abs(z[n, i].imag) > NEAR_REAL * scale and abs(
                            z[n, i] - z[n, j].conjugate()
                        ) < NEAR_REAL * scale
                        if conj:
                            continue
                        g = abs(ai - aj)
                        if g < NEAR_EQUAL * scale or unsure >= UNSURE * g:
                            f = True
                            continue
                        if g < best:
                            best = g
            out[n] = best
            flag[n] = f


def aberth_roots(coeffs, maxiter: int = 200, tol: float = 1e-15, backend: str | None = None):
    """Approximate all roots of each row of ``coeffs`` (ascending order).

    Returns ``(roots, converged)`` with shapes ``(N, d)`` and ``(N,)``.
    """
    coeffs = np.ascontiguousarray(np.atleast_2d(coeffs), dtype=np.float64)
    backend = backend or BACKEND
    if backend == "numba" and njit is not None:
        z = initial_guesses(coeffs)
        ok = np.zeros(coeffs.shape[0], dtype=np.bool_)
        _aberth_batch_nb(coeffs, z, maxiter, tol, ok)
        return z, ok
    return _aberth_numpy(coeffs, maxiter, tol)


def screen(coeffs, metric: int, backend: str | None = None):
    """Float metric per row plus a flag marking rows that need exact treatment.

    For ``METRIC_SEP`` the value is the minimum root distance; for
    ``METRIC_ABSSEP`` the minimum modulus gap over pairs that are neither
    conjugate nor numerically equal in modulus.  Rows are flagged when a
    pair is nearly coincident, when the per-root error estimate
    d |P(z)| / |P'(z)| is not small against the pair's gap, or when the
    iteration did not converge.
    """
    backend = backend or BACKEND
    coeffs = np.ascontiguousarray(np.atleast_2d(coeffs), dtype=np.float64)
    z, ok = aberth_roots(coeffs, backend=backend)
    if backend == "numba" and njit is not None:
        out = np.empty(z.shape[0])
        flag = np.zeros(z.shape[0], dtype=np.bool_)
        _metric_batch_nb(coeffs, z, metric, out, flag)
    else:
        out, flag = _metric_numpy(coeffs, z, metric)
    return out, flag | ~ok
