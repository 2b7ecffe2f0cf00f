"""Benchmark the Hermite-table kernels: numba loops vs vectorized numpy.

Run:  python benchmarks/bench_hermite.py [--points 2048] [--orders 512] [--repeat 5]

Both paths produce bitwise-identical tables (asserted below); the question
is only speed.  The jitted path wins on large tables because it writes each
row in one pass instead of materializing a temporary per recurrence step.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fourlab import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=2048)
    ap.add_argument("--orders", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    x = np.linspace(-6.0, 6.0, args.points)
    seed = _kernels.seed_row(x)
    a, b = _kernels.recurrence_coeffs(args.orders)

    ref = _kernels._table_numpy(x, seed, a, b, args.orders)
    print(f"table: {args.points} points x {args.orders} orders "
          f"({ref.nbytes / 1e6:.1f} MB), best of {args.repeat}")

    t_numpy = best_of(lambda: _kernels._table_numpy(x, seed, a, b, args.orders), args.repeat)
    print(f"  numpy : {t_numpy * 1e3:8.2f} ms")

    if not _kernels.NUMBA_ENABLED:
        print("  numba : unavailable (not installed or FOURLAB_NO_NUMBA set)")
        return

    jit = _kernels._table_impl
    out = jit(x, seed, a, b, args.orders)  # warm the JIT cache before timing
    assert np.array_equal(out, ref), "paths diverged"
    t_numba = best_of(lambda: jit(x, seed, a, b, args.orders), args.repeat)
    print(f"  numba : {t_numba * 1e3:8.2f} ms   ({t_numpy / t_numba:.2f}x vs numpy)")


if __name__ == "__main__":
    main()
