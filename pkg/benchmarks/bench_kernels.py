#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Loads both backends into one process and times the hot paths on an
exhaustive-search-shaped workload (every subset of the pool scored on every
query) plus the metric kernels.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --n-demos 12 --n-queries 32 --repeat 5
"""

import argparse
import itertools
import time

import numpy as np

from demoselect.kernels import numpy_backend

try:
    from demoselect.kernels import numba_backend
except ImportError:
    numba_backend = None


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def subset_scan(backend, A, B, subsets, q_ids, lam, sigma):
    total = 0.0
    for members in subsets:
        out = backend.batch_scores(A, B, members, q_ids, lam, sigma, False, np.uint64(9))
        total += out[0]
    return total


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-demos", type=int, default=10)
    parser.add_argument("--n-queries", type=int, default=16)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--mask-pixels", type=int, default=1 << 20)
    args = parser.parse_args()

    nd, nq = args.n_demos, args.n_queries
    rng = np.random.default_rng(0)
    A = rng.uniform(0.2, 0.6, size=(nd, nd + nq))
    B = rng.uniform(-1.0, 1.0, size=(nd, nd))
    B = np.triu(B, 1) + np.triu(B, 1).T
    q_ids = np.arange(nd, nd + nq, dtype=np.int64)
    subsets = [
        np.array(c, dtype=np.int64)
        for size in range(1, nd + 1)
        for c in itertools.combinations(range(nd), size)
    ]
    mask_a = rng.random(args.mask_pixels) > 0.5
    mask_b = rng.random(args.mask_pixels) > 0.5
    img_a = rng.random(args.mask_pixels)
    img_b = rng.random(args.mask_pixels)

    backends = [("numpy", numpy_backend)]
    if numba_backend is not None:
        # trigger jit before timing
        subset_scan(numba_backend, A, B, subsets[:2], q_ids, 0.5, 0.1)
        numba_backend.iou_counts(mask_a[:8], mask_b[:8])
        numba_backend.sq_err_sum(img_a[:8], img_b[:8])
        backends.append(("numba", numba_backend))
    else:
        print("numba not importable; timing the numpy fallback only")

    workloads = {
        f"subset scan ({len(subsets)} subsets x {nq} queries)": lambda be: subset_scan(
            be, A, B, subsets, q_ids, 0.5, 0.1
        ),
        f"iou counts ({args.mask_pixels} px)": lambda be: be.iou_counts(mask_a, mask_b),
        f"sq err sum ({args.mask_pixels} px)": lambda be: be.sq_err_sum(img_a, img_b),
    }

    print(f"{'workload':<44} " + " ".join(f"{name:>12}" for name, _ in backends) + f" {'speedup':>9}")
    for label, workload in workloads.items():
        times = [time_call(lambda be=be: workload(be), args.repeat) for _, be in backends]
        cells = " ".join(f"{t * 1e3:>10.2f}ms" for t in times)
        speedup = f"{times[0] / times[-1]:>8.1f}x" if len(times) > 1 else "       -"
        print(f"{label:<44} {cells} {speedup}")

    # sanity: the two backends agree on the landscape kernel bit for bit
    if numba_backend is not None:
        for members in subsets[:50]:
            a = numpy_backend.batch_scores(A, B, members, q_ids, 0.5, 0.1, False, np.uint64(9))
            b = numba_backend.batch_scores(A, B, members, q_ids, 0.5, 0.1, False, np.uint64(9))
            assert a.tobytes() == b.tobytes()
        print("backend agreement: batch_scores bit-identical on 50 probe subsets")


if __name__ == "__main__":
    main()
