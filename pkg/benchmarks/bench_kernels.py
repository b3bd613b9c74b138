"""Benchmark the jitted kernels against the pure-numpy fallbacks.

Usage:
    python3 benchmarks/bench_kernels.py [--size 1000000] [--draws 1000000]
                                        [--dim 400] [--nnz 20000] [--repeat 5]

Each kernel is warmed up once per backend (this triggers jit compilation, so
compile time never pollutes the numbers) and the minimum wall time over
--repeat runs is reported. To benchmark the numpy path in isolation, run any
workload with ELEMSPARSE_NO_NUMBA=1; this script always times both backends
explicitly via the kernels.BACKENDS registry.
"""

import argparse
import time

import numpy as np

from elemsparse import kernels


def _time(fn, *args, repeat: int) -> float:
    fn(*args)  # warmup / jit compile
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _workloads(size: int, draws: int, dim: int, nnz: int):
    rng = np.random.default_rng(0)
    probs = rng.random(size)
    probs /= probs.sum()
    prob, alias = kernels.BACKENDS["numpy"]["alias_build"](probs)
    u = rng.random((draws, 2))
    a = rng.standard_normal((dim, dim))
    v0 = rng.standard_normal(dim)
    rows = rng.integers(0, dim, nnz)
    cols = rng.integers(0, dim, nnz)
    vals = rng.standard_normal(nnz)
    return [
        (f"alias_build[{size}]", "alias_build", (probs,)),
        (f"alias_draw[{draws}]", "alias_draw", (prob, alias, u[:, 0], u[:, 1])),
        (f"power_iter_dense[{dim}x{dim}]", "power_iter_dense", (a, v0, 1e-9, 5000)),
        (f"power_iter_diff[{dim}x{dim},nnz={nnz}]", "power_iter_diff",
         (rows, cols, vals, a, v0, 1e-9, 5000)),
    ]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=1_000_000, help="alias table size")
    ap.add_argument("--draws", type=int, default=1_000_000, help="alias draw count")
    ap.add_argument("--dim", type=int, default=400, help="power-iteration matrix dim")
    ap.add_argument("--nnz", type=int, default=20_000, help="sketch nnz for the diff operator")
    ap.add_argument("--repeat", type=int, default=5, help="timed repetitions per kernel")
    args = ap.parse_args(argv)

    backends = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])
    if not kernels.HAVE_NUMBA:
        print("numba unavailable; timing the numpy fallback only")
    print(f"{'kernel':<40} " + " ".join(f"{b + ' (ms)':>12}" for b in backends)
          + ("     speedup" if len(backends) == 2 else ""))
    for label, name, wargs in _workloads(args.size, args.draws, args.dim, args.nnz):
        times = [_time(kernels.BACKENDS[b][name], *wargs, repeat=args.repeat)
                 for b in backends]
        row = f"{label:<40} " + " ".join(f"{t * 1e3:>12.3f}" for t in times)
        if len(times) == 2:
            row += f" {times[0] / times[1]:>10.2f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
