#!/usr/bin/env python3
"""Benchmark the compiled enumeration kernel against the pure-Python fallback.

Times constrained_spin_sum on single-constraint marginal workloads of
increasing direction count and verifies along the way that both backends
return bit-identical results.

    python benchmarks/bench_kernels.py --sizes 8,12,16,18 --repeat 3
"""

import argparse
import time

import numpy as np

from ampdist import _kernels_py

try:
    from ampdist import _kernels as compiled
except ImportError:
    compiled = None


def random_components(rng, n):
    v = rng.normal(size=(n, 3))
    return np.ascontiguousarray(v / np.linalg.norm(v, axis=1, keepdims=True))


def time_backend(fn, comps, idx, sgn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(comps, idx, sgn)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="8,12,16,18")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument(
        "--python-cap",
        type=int,
        default=18,
        help="skip the pure-Python fallback above this direction count",
    )
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    rng = np.random.default_rng(args.seed)

    if compiled is None:
        print("compiled kernel not built; benchmarking the fallback only")
    print(f"{'n':>4} {'configs':>10} {'cython':>12} {'python':>12} {'speedup':>9}")
    for n in sizes:
        comps = random_components(rng, n)
        idx = np.array([0, 1], dtype=np.int64)
        sgn = np.array([1, -1], dtype=np.int64)
        configs = 1 << (n - 2)
        row = [f"{n:>4}", f"{configs:>10}"]
        t_c = r_c = None
        if compiled is not None:
            t_c, r_c = time_backend(
                compiled.constrained_spin_sum, comps, idx, sgn, args.repeat
            )
            row.append(f"{t_c * 1e3:>10.2f}ms")
        else:
            row.append(f"{'-':>12}")
        if n <= args.python_cap:
            t_p, r_p = time_backend(
                _kernels_py.constrained_spin_sum, comps, idx, sgn, args.repeat
            )
            row.append(f"{t_p * 1e3:>10.2f}ms")
            if r_c is not None and r_p != r_c:
                raise SystemExit(f"backend mismatch at n={n}: {r_c} vs {r_p}")
            row.append(f"{t_p / t_c:>8.1f}x" if t_c else f"{'-':>9}")
        else:
            row.append(f"{'skipped':>12}")
            row.append(f"{'-':>9}")
        print(" ".join(row))


if __name__ == "__main__":
    main()
