"""Benchmark the two cosine-scan kernel paths against each other.

Runs the scoring kernel over a synthetic corpus with both the numba
njit implementation and the pure-numpy fallback, reports timings, and
verifies the two produce bit-identical scores.

Usage:
    python3 benchmarks/bench_search.py [--rows 50000] [--dim 256] [--repeats 20]
"""

import argparse
import time

import numpy as np

from geoagent.kernels import (
    _build_numba_kernel,
    cosine_scores_numpy,
    normalize_rows,
)


def bench(fn, matrix, query, repeats):
    fn(matrix, query)  # warm up (also triggers jit compilation)
    start = time.perf_counter()
    for _ in range(repeats):
        out = fn(matrix, query)
    elapsed = (time.perf_counter() - start) / repeats
    return elapsed, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=50_000)
    parser.add_argument("--dim", type=int, default=256)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    matrix = normalize_rows(rng.standard_normal((args.rows, args.dim)))
    query = rng.standard_normal(args.dim)
    query /= np.linalg.norm(query)

    numba_kernel = _build_numba_kernel()
    if numba_kernel is None:
        print("numba unavailable; benchmarking the numpy path only")
        t_np, _ = bench(cosine_scores_numpy, matrix, query, args.repeats)
        print(f"numpy : {t_np * 1e3:8.3f} ms / scan ({args.rows} x {args.dim})")
        return

    t_nb, scores_nb = bench(numba_kernel, matrix, query, args.repeats)
    t_np, scores_np = bench(cosine_scores_numpy, matrix, query, args.repeats)

    identical = np.array_equal(scores_nb, scores_np)
    print(f"corpus: {args.rows} rows x {args.dim} dims, {args.repeats} repeats")
    print(f"numba : {t_nb * 1e3:8.3f} ms / scan")
    print(f"numpy : {t_np * 1e3:8.3f} ms / scan")
    print(f"ratio : numpy / numba = {t_np / t_nb:.2f}x")
    print(f"scores bit-identical: {identical}")
    if not identical:
        raise SystemExit("kernel paths disagree; determinism contract broken")


if __name__ == "__main__":
    main()
