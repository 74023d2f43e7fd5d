#!/usr/bin/env python3
"""Benchmark: compiled kernels vs the pure-Python/numpy fallback.

Times the scalar hot calls, the grid scans, and a small end-to-end
time-optimization sweep through both kernel modules.  Run after an
in-place build:

    python benchmarks/bench_backends.py
"""

import time

import numpy as np

from fbmprobe import _pykern

try:
    from fbmprobe import _ckern
except ImportError:
    _ckern = None

N_SCALAR = 20000
GRID = np.geomspace(1e-4, 1e3, 4001)
SWEEP_CELLS = 200


def bench(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def scalar_loop(kern):
    g, lam = 1.45, 0.7
    acc = 0.0
    for i in range(N_SCALAR):
        acc += kern.g_bures_fn(g, lam, 0.01 + 1e-4 * i)
    return acc


def grid_scan(kern):
    return kern.g_bures_grid(1.45, 0.7, GRID)


def chernoff_scan(kern):
    return kern.chernoff_grid(1.3, 1.6, 0.7, GRID, 1e-10)


def mini_sweep(kern):
    # coarse part of a coupling sweep: one grid scan per coupling cell
    for lam in np.geomspace(1e-3, 1e3, SWEEP_CELLS):
        kern.g_bures_grid(1.5, float(lam), GRID)


CASES = [
    (f"metric scalar x{N_SCALAR}", scalar_loop),
    (f"metric grid ({len(GRID)} pts)", grid_scan),
    (f"chernoff grid ({len(GRID)} pts, inner s-search)", chernoff_scan),
    (f"coupling sweep ({SWEEP_CELLS} cells)", mini_sweep),
]


END_TO_END = r"""
import numpy as np
import fbmprobe as fp
pairs = [(1.2, 1.4), (1.4, 1.6), (1.6, 1.8)]
for g1, g2 in pairs:
    for lam in np.geomspace(1e-2, 1e2, 10):
        pr = fp.DiscriminationPair(fp.HurstPoint(g1), fp.HurstPoint(g2),
                                   fp.Coupling(float(lam)))
        fp.minimize_q_over_t(pr)
"""


def bench_end_to_end(backend: str) -> float:
    import os
    import subprocess
    import sys

    env = dict(os.environ, FBMPROBE_BACKEND=backend)
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        subprocess.run([sys.executable, "-c", END_TO_END], env=env,
                       check=True)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    if _ckern is None:
        print("compiled extension not built; timing the fallback only\n")
    header = f"{'case':<46}{'python':>12}{'compiled':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, fn in CASES:
        t_py = bench(fn, _pykern)
        if _ckern is not None:
            t_c = bench(fn, _ckern)
            print(f"{name:<46}{t_py * 1e3:>10.1f}ms{t_c * 1e3:>10.1f}ms"
                  f"{t_py / t_c:>9.1f}x")
        else:
            print(f"{name:<46}{t_py * 1e3:>10.1f}ms{'-':>12}{'-':>10}")

    name = "chernoff optimization sweep (30 cells, e2e)"
    t_py = bench_end_to_end("python")
    if _ckern is not None:
        t_c = bench_end_to_end("c")
        print(f"{name:<46}{t_py * 1e3:>10.1f}ms{t_c * 1e3:>10.1f}ms"
              f"{t_py / t_c:>9.1f}x")
    else:
        print(f"{name:<46}{t_py * 1e3:>10.1f}ms{'-':>12}{'-':>10}")
    print("\n(end-to-end numbers include interpreter startup "
          "in both columns)")


if __name__ == "__main__":
    main()
