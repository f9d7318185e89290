#!/usr/bin/env python3
"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 20] [--json out.json]

Kernels are timed in-process (both variants are always importable). The
forest fit goes through the public API, so it runs once per backend in a
child process with EVOOFLUOR_NO_NUMBA set accordingly.
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from evoofluor import kernels
from evoofluor._accel import HAS_NUMBA
from evoofluor.spectra import DEFAULT_GRID, rayleigh_centers

FOREST_SNIPPET = """
import time, numpy as np
from evoofluor.learn.forest import fit_forest
rng = np.random.default_rng(0)
X = rng.random((240, 2)); y = (X[:, 0] + rng.normal(0, .2, 240) > .5).astype(int)
fit_forest(X, y, np.random.default_rng(1))          # warm-up / compile
t = time.perf_counter()
for s in range({n}):
    fit_forest(X, y, np.random.default_rng(s))
print((time.perf_counter() - t) / {n})
"""


def best_of(fn, repeat):
    fn()  # warm-up, includes jit compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def kernel_cases():
    rng = np.random.default_rng(0)
    eem = rng.random(DEFAULT_GRID.shape)
    centers = rayleigh_centers(DEFAULT_GRID)
    ref, aged = rng.random((36, 251)), rng.random((36, 251))
    X = rng.random((240, 2))
    y = (X[:, 0] > 0.5).astype(np.int64)
    w = np.full(240, 1 / 240)
    feats = np.array([0, 1], dtype=np.int64)
    return {
        "mask_windows": ((eem, centers, 5), kernels.mask_windows_numpy, kernels.mask_windows_numba),
        "row_sq_norms": ((ref, aged), kernels.row_sq_norms_numpy, kernels.row_sq_norms_numba),
        "best_split": ((X, y, w, feats, False), kernels.best_split_numpy, kernels.best_split_numba),
    }


def forest_time(no_numba, n):
    env = dict(os.environ, EVOOFLUOR_NO_NUMBA="1" if no_numba else "0")
    out = subprocess.run([sys.executable, "-c", FOREST_SNIPPET.format(n=n)], env=env,
                         check=True, capture_output=True, text=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--forest-fits", type=int, default=5)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args()
    if not HAS_NUMBA:
        sys.exit("numba is not installed; nothing to compare")

    rows = []
    for name, (inputs, f_np, f_nb) in kernel_cases().items():
        t_np = best_of(lambda: f_np(*inputs), args.repeat)
        t_nb = best_of(lambda: f_nb(*inputs), args.repeat)
        rows.append((name, t_np, t_nb))
    rows.append(("fit_forest (100 trees)", forest_time(True, args.forest_fits),
                 forest_time(False, args.forest_fits)))

    print(f"{'kernel':<24}{'numpy (ms)':>12}{'numba (ms)':>12}{'speed-up':>10}")
    for name, a, b in rows:
        print(f"{name:<24}{a * 1e3:>12.3f}{b * 1e3:>12.3f}{a / b:>9.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([{"kernel": n, "numpy_s": a, "numba_s": b} for n, a, b in rows], fh, indent=1)


if __name__ == "__main__":
    main()
