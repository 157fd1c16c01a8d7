"""Benchmark the compiled finite-field kernel against the pure-Python twin.

Usage: python benchmarks/bench_core.py [trials]

Both backends consume identical coefficient batches, so the timing gap is
pure kernel speed; the outputs are compared for equality as a side check.
"""

import sys
import time

import numpy as np

from fanostrata.core import BACKEND, backends

CASES = [
    (4, 3, 101),
    (5, 5, 101),
    (6, 7, 1009),
]


def run(trials: int):
    print(f"active backend: {BACKEND}")
    avail = backends()
    if len(avail) == 1:
        print("compiled kernel not built; timing the pure backend only")
    for n, d, p in CASES:
        rng = np.random.default_rng(12345)
        coeffs = rng.integers(0, p, size=(trials, (n - 1) * d), dtype=np.int64)
        results = {}
        times = {}
        for name, mod in avail:
            t0 = time.perf_counter()
            results[name] = mod.batch_multiplicities(coeffs, n, d, p)
            times[name] = time.perf_counter() - t0
        line = f"n={n} d={d} p={p:>5} trials={trials:>8}"
        for name, t in times.items():
            line += f"  {name}: {t:8.3f}s ({trials / t:,.0f}/s)"
        if len(results) == 2:
            same = bool((results["cython"] == results["python"]).all())
            line += f"  agree: {same}"
            if times["python"] > 0 and "cython" in times:
                line += f"  speedup: {times['python'] / times['cython']:.0f}x"
        print(line)


if __name__ == "__main__":
    run(int(sys.argv[1]) if len(sys.argv) > 1 else 20000)
