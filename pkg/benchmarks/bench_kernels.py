#!/usr/bin/env python3
"""Benchmark the JIT-compiled kernels against the pure-Python fallback path.

Both paths run the same loop bodies (see weightlab._kernels), so this is a
pure compilation comparison; outputs are checked equal while timing.  Run:

    python benchmarks/bench_kernels.py [--sizes 486,1458,4374] [--repeats 3]
"""

import argparse
import time

import numpy as np

from weightlab import _kernels as K


def best_of(fn, args, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def leading_values(result):
    if isinstance(result, tuple):
        result = result[0]
    return np.atleast_1d(result)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="486,1458,4374",
                        help="comma-separated grid sizes")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if K.NUMBA_KERNELS is None:
        raise SystemExit("numba unavailable; nothing to compare")

    rng = np.random.default_rng(0)
    rows = []
    for G in sizes:
        values = rng.random(G) + 0.1
        S = K.doubled_prefix(values)
        S1 = S
        S2 = K.doubled_prefix(1.0 / values)
        cases = {
            "neumaier_prefix": (values,),
            "maximal_naive": (values, S),
            "maximal_fast": (values, S),
            "ap_scan_all": (S1, S2, G, 1.0),
            "rh_scan_all": (S1, S2, G, 0.8),
        }
        for name, call_args in cases.items():
            jit_fn = K.NUMBA_KERNELS[name]
            py_fn = K.PYTHON_KERNELS[name]
            jit_fn(*call_args)  # warm the compilation cache
            t_jit, r_jit = best_of(jit_fn, call_args, args.repeats)
            t_py, r_py = best_of(py_fn, call_args, 1)
            assert np.array_equal(leading_values(r_jit), leading_values(r_py)), name
            rows.append((name, G, t_py, t_jit, t_py / t_jit))

    print(f"{'kernel':<18} {'G':>7} {'python (s)':>12} {'numba (s)':>12} {'speedup':>9}")
    for name, G, t_py, t_jit, speedup in rows:
        print(f"{name:<18} {G:>7} {t_py:>12.4f} {t_jit:>12.6f} {speedup:>8.0f}x")


if __name__ == "__main__":
    main()
