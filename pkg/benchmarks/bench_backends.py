"""Timing comparison of the numba and numpy kernel backends.

Runs the two hot kernels, the duration-grid scan and the zero-forcing
gain batch, under each available backend and prints the best wall time
per call. The numba path is warmed up before timing so compilation is
not billed to the measurement.

Usage:
    python3 benchmarks/bench_backends.py [--step 1e-5] [--draws 20000]
        [--repeats 5]
"""

import argparse
import os
import time

import numpy as np

from vrcc.kernels import BACKEND_ENV_VAR, grid_scan, numba_available, zf_gains


def best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--step",
        type=float,
        default=1e-5,
        help="lattice step for the grid scan (default 1e-5, ~100k rows)",
    )
    parser.add_argument(
        "--draws",
        type=int,
        default=20_000,
        help="channel draws for the gain batch (default 20000)",
    )
    parser.add_argument(
        "--repeats", type=int, default=5, help="timing repeats, best is kept"
    )
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    z = rng.standard_normal((args.draws, 4, 8, 2))
    h = (z[..., 0] + 1j * z[..., 1]) * np.sqrt(0.5)

    workloads = [
        ("grid_scan", lambda: grid_scan(9e8, 4e8, 1.5, 1.0, args.step)),
        ("zf_gains", lambda: zf_gains(h)),
    ]
    backends = ["numpy"]
    if numba_available():
        backends.append("numba")
    else:
        print("numba is not importable; timing the numpy backend only")

    previous = os.environ.get(BACKEND_ENV_VAR)
    results = {}
    try:
        for backend in backends:
            os.environ[BACKEND_ENV_VAR] = backend
            for name, fn in workloads:
                fn()  # warm-up; compiles on the numba path
                results[(name, backend)] = best_time(fn, args.repeats)
    finally:
        if previous is None:
            os.environ.pop(BACKEND_ENV_VAR, None)
        else:
            os.environ[BACKEND_ENV_VAR] = previous

    header = f"{'kernel':<12} {'backend':<8} {'best seconds':>14} {'vs numpy':>10}"
    print(header)
    print("-" * len(header))
    for name, _ in workloads:
        base = results[(name, "numpy")]
        for backend in backends:
            seconds = results[(name, backend)]
            ratio = base / seconds if seconds > 0 else float("inf")
            print(f"{name:<12} {backend:<8} {seconds:>14.6f} {ratio:>9.2f}x")


if __name__ == "__main__":
    main()
