"""Benchmark the compiled assignment kernel against the numpy fallback.

Usage: python benchmarks/bench_assignment.py [--sizes 10,20,50,100,200]

Times the raw square solver from both backends on identical inputs, verifies
they agree bit for bit, and reports an end-to-end welfare solve with each
backend forced. The kernel runs once per agent per solver round, so these
numbers bound the whole package's throughput.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from recmatch.assign import _kernel_py

try:
    from recmatch.assign import _kernel as kernel_c
except ImportError:
    kernel_c = None


def time_kernel(solver, mats, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for mat in mats:
            solver(mat)
        best = min(best, (time.perf_counter() - start) / len(mats))
    return best


def bench_kernels(sizes):
    rng = np.random.default_rng(0)
    print(f"{'d':>5} {'python':>12} {'compiled':>12} {'speedup':>9}", flush=True)
    for d in sizes:
        count = max(3, min(50, 2000 // d))
        mats = [rng.normal(size=(d, d)) for _ in range(count)]
        t_py = time_kernel(_kernel_py.solve_square_min, mats)
        if kernel_c is None:
            print(f"{d:>5} {t_py * 1e6:>10.1f}us {'-':>12} {'-':>9}", flush=True)
            continue
        t_c = time_kernel(kernel_c.solve_square_min, mats)
        for mat in mats[:3]:
            res_py = _kernel_py.solve_square_min(mat)
            res_c = kernel_c.solve_square_min(mat)
            assert all(np.array_equal(a, b) for a, b in zip(res_py, res_c))
        print(
            f"{d:>5} {t_py * 1e6:>10.1f}us {t_c * 1e6:>10.1f}us "
            f"{t_py / t_c:>8.1f}x",
            flush=True,
        )


def bench_solve():
    # end-to-end: one fairness solve on a desk-scale market
    import os
    import subprocess
    import sys

    code = (
        "import time\n"
        "from recmatch import fw\n"
        "from recmatch.assign import BACKEND\n"
        "from recmatch.datagen import SynthSpec, synth_instance\n"
        "inst = synth_instance(SynthSpec(n=20, m=20, lam=0.4, seed=1))\n"
        "start = time.perf_counter()\n"
        "fw.solve(inst, fw.SolverConfig(objective='NSW', max_iterations=150))\n"
        "print(f'{BACKEND}: {time.perf_counter() - start:.2f}s "
        "(NSW, n=m=20, 150 rounds)')\n"
    )
    for backend in ("", "python"):
        env = dict(os.environ, RECMATCH_BACKEND=backend)
        subprocess.run([sys.executable, "-c", code], env=env, check=True)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="10,20,50,100,200")
    parser.add_argument(
        "--skip-solve", action="store_true", help="kernel microbenchmark only"
    )
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    bench_kernels(sizes)
    if not args.skip_solve:
        bench_solve()


if __name__ == "__main__":
    main()
