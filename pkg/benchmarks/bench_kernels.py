"""Compare the numba and numpy screening kernels on random integer polynomials.

    python benchmarks/bench_kernels.py [--rows 200000] [--degree 3] [--bound 20]

Both backends are timed on the same batch after a warm-up call (so numba
compilation is excluded), and their outputs are compared.
"""

import argparse
import time

import numpy as np

from sepkit import _kernels


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=200_000)
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--bound", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    B, d = args.bound, args.degree
    coeffs = rng.integers(-B, B + 1, size=(args.rows, d + 1)).astype(np.float64)
    coeffs[:, d] = rng.integers(1, B + 1, size=args.rows)

    backends = ["numpy"] + (["numba"] if _kernels.njit is not None else [])
    results = {}
    for metric, name in ((_kernels.METRIC_SEP, "sep"), (_kernels.METRIC_ABSSEP, "abssep")):
        for be in backends:
            _kernels.screen(coeffs[:100], metric, backend=be)
            t = time.perf_counter()
            vals, flags = _kernels.screen(coeffs, metric, backend=be)
            dt = time.perf_counter() - t
            results[(name, be)] = (vals, flags)
            print(f"{name:7s} {be:6s} {args.rows:8d} rows  {dt:7.3f} s  {1e6 * dt / args.rows:7.2f} us/row")
        if len(backends) == 2:
            (v0, f0), (v1, f1) = results[(name, "numpy")], results[(name, "numba")]
            both = ~f0 & ~f1 & np.isfinite(v0) & np.isfinite(v1)
            rel = np.abs(v0[both] - v1[both]) / np.maximum(v0[both], 1e-300)
            print(f"{name:7s} flag disagreement {np.count_nonzero(f0 != f1)}, "
                  f"max relative difference on unflagged rows {rel.max():.2e}")


if __name__ == "__main__":
    main()
