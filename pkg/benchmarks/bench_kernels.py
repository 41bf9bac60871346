"""Timing comparison of the numba kernels against their numpy fallbacks.

Runs each hot kernel on representative workloads through both paths and
prints a small table. The numba path is what SOBOLEV_LAB_NUMBA=1 (the
default) selects at import time; here both variants are called explicitly
so one process can time them side by side.

Usage: python benchmarks/bench_kernels.py [repeats]
"""

import sys
import time

import numpy as np

from sobolev_lab import _kernels


def best_of(fn, args, repeats):
    fn(*args)  # warm up (jit compilation, caches)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench(repeats: int) -> None:
    rng = np.random.default_rng(42)

    t = rng.uniform(-1.0, 1.0, size=512)
    geg_args = (1.5, 128, t)

    tn = rng.uniform(-1.0, 1.0, size=256)
    tw = rng.uniform(0.1, 1.0, size=256)
    fvals = rng.standard_normal(256)
    cn = rng.uniform(-1.0, 1.0, size=64)
    cw = rng.uniform(0.1, 1.0, size=64)
    zeta_args = (0.3, 0.4, np.sqrt(1.0 - 0.3**2 - 0.4**2), 2.5, tn, tw, fvals, cn, cw)

    a = rng.standard_normal((64, 48))
    f0 = np.ones(48) / np.sqrt(48.0)
    ascent_args = (a, 3.0, f0, 2000, 1e-13)

    cases = [
        ("gegenbauer_table", _kernels.gegenbauer_table_numpy, _kernels.gegenbauer_table_jit, geg_args),
        ("zeta_moment", _kernels.zeta_moment_numpy, _kernels.zeta_moment_jit, zeta_args),
        ("lq_ascent", _kernels.lq_ascent_numpy, _kernels.lq_ascent_jit, ascent_args),
    ]

    print("backend numba available: %s (active: %s)" % (_kernels.HAS_NUMBA, _kernels.BACKEND))
    print("%-18s %12s %12s %8s" % ("kernel", "numpy [ms]", "numba [ms]", "speedup"))
    for name, fn_np, fn_jit, args in cases:
        t_np = best_of(fn_np, args, repeats) * 1e3
        if fn_jit is None:
            print("%-18s %12.3f %12s %8s" % (name, t_np, "n/a", "n/a"))
            continue
        t_jit = best_of(fn_jit, args, repeats) * 1e3
        print("%-18s %12.3f %12.3f %7.1fx" % (name, t_np, t_jit, t_np / t_jit))


if __name__ == "__main__":
    bench(int(sys.argv[1]) if len(sys.argv) > 1 else 7)
