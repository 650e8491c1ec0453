"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the two hot operations (batched quadratic forms and histogram
binning) plus an end-to-end shadow estimate. Run from the repository root:

    python benchmarks/bench_kernels.py [--n 1000000] [--dim 8]

The end-to-end numbers for the fallback are measured in a subprocess with
NUMSHADOW_PURE_PY=1 so that the import-time backend selection is exercised
exactly as a user without the extension would see it.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from numshadow import _kernels_py, backend


def timed(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(n, dim):
    gen = np.random.default_rng(0)
    a = np.ascontiguousarray(gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim)))
    states = gen.standard_normal((n, dim)) + 1j * gen.standard_normal((n, dim))
    states = np.ascontiguousarray(states / np.linalg.norm(states, axis=1, keepdims=True))
    z = _kernels_py.quad_forms(a, states)
    re = np.ascontiguousarray(z.real)
    im = np.ascontiguousarray(z.imag)

    rows = []
    if backend.COMPILED:
        from numshadow import _kernels

        rows.append(("quad_forms", "compiled", timed(lambda: _kernels.quad_forms(a, states))))
    rows.append(("quad_forms", "numpy", timed(lambda: _kernels_py.quad_forms(a, states))))

    def run_bins(impl):
        counts = np.zeros((256, 256), dtype=np.int64)
        impl.bin_counts(re, im, -4.0, 4.0, -4.0, 4.0, counts)

    if backend.COMPILED:
        from numshadow import _kernels

        rows.append(("bin_counts", "compiled", timed(lambda: run_bins(_kernels))))
    rows.append(("bin_counts", "numpy", timed(lambda: run_bins(_kernels_py))))
    return rows


END_TO_END = """
import time
import numpy as np
from numshadow import backend, catalog, engine, sampling
t0 = time.perf_counter()
engine.estimate_shadow(catalog.get("B4e").matrix, sampling.product((2, 2)), {n},
                       rng=sampling.RngStream(0))
print(("compiled" if backend.COMPILED else "numpy"), time.perf_counter() - t0)
"""


def bench_end_to_end(n):
    rows = []
    for env_val in (None, "1"):
        env = dict(os.environ)
        env.pop("NUMSHADOW_PURE_PY", None)
        if env_val:
            env["NUMSHADOW_PURE_PY"] = env_val
        res = subprocess.run([sys.executable, "-c", END_TO_END.format(n=n)],
                             env=env, capture_output=True, text=True, check=True)
        tag, seconds = res.stdout.split()
        rows.append(("estimate_shadow", tag, float(seconds)))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1_000_000)
    parser.add_argument("--dim", type=int, default=8)
    args = parser.parse_args()

    print(f"n = {args.n}, dim = {args.dim}, extension built: {backend.COMPILED}")
    rows = bench_kernels(args.n, args.dim) + bench_end_to_end(args.n)
    print(f"{'operation':<18}{'backend':<10}{'seconds':>10}{'Msamples/s':>14}")
    for op, tag, seconds in rows:
        print(f"{op:<18}{tag:<10}{seconds:>10.3f}{args.n / seconds / 1e6:>14.1f}")


if __name__ == "__main__":
    main()
