import numpy as np
import pytest

from sepkit import _kernels


def _batch(n=2000, d=4, B=10, seed=3):
    rng = np.random.default_rng(seed)
    c = rng.integers(-B, B + 1, size=(n, d + 1)).astype(float)
    c[:, d] = rng.integers(1, B + 1, size=n)
    return c


def test_numpy_backend_finds_roots():
    c = _batch()
    z, ok = _kernels.aberth_roots(c, backend="numpy")
    assert ok.mean() > 0.99
    for row, zs, good in zip(c[:50], z[:50], ok[:50]):
        if good:
            ref = np.roots(row[::-1])
            # every computed root is near some reference root, and vice versa
            dist = np.abs(zs[:, None] - ref[None, :])
            assert dist.min(axis=1).max() < 1e-6 and dist.min(axis=0).max() < 1e-6


@pytest.mark.skipif(_kernels.njit is None, reason="numba not installed")
@pytest.mark.parametrize("metric", [_kernels.METRIC_SEP, _kernels.METRIC_ABSSEP])
def test_backends_agree(metric):
    c = _batch()
    v0, f0 = _kernels.screen(c, metric, backend="numpy")
    v1, f1 = _kernels.screen(c, metric, backend="numba")
    both = ~f0 & ~f1 & np.isfinite(v0)
    assert np.count_nonzero(f0 != f1) <= len(c) // 100
    assert np.allclose(v0[both], v1[both], rtol=1e-9)


def test_triple_root_is_flagged():
    c = np.array([[1.0, 3.0, 3.0, 1.0]])
    for be in ("numpy",) + (("numba",) if _kernels.njit is not None else ()):
        _, f = _kernels.screen(c, _kernels.METRIC_ABSSEP, backend=be)
        assert f[0]


def test_record_values_screen():
    c = np.array([[2.0, -13, 17, 14], [8.0, -7, -9, 17]])
    v, f = _kernels.screen(c, _kernels.METRIC_SEP)
    assert v[0] == pytest.approx(0.00493788, rel=1e-5) and not f[0]
    v, f = _kernels.screen(c, _kernels.METRIC_ABSSEP)
    assert v[1] == pytest.approx(1.2332453610e-5, rel=1e-6) and not f[1]
