"""Time the numba kernels against the numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends are called directly, so LIMITLOG_BACKEND does not matter here.
Results of the two backends are compared on every input before timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from limitlog import kernels


def random_weights(rng, n, density=0.3, low=-2, high=9):
    w = np.full((n, n), kernels.NO_EDGE, dtype=np.int64)
    mask = rng.random((n, n)) < density
    w[mask] = rng.integers(low, high, size=mask.sum())
    return w


def random_box(rng, n, m=4, coeff=5):
    a = rng.integers(-coeff, coeff + 1, size=(m, n)).astype(np.int64)
    b = rng.integers(0, 20, size=m).astype(np.int64)
    c = rng.integers(-coeff, coeff + 1, size=n).astype(np.int64)
    return a, b, c


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        print("numba not available; nothing to compare")
        return
    rng = np.random.default_rng(args.seed)

    print(f"{'kernel':<28}{'numpy s':>12}{'numba s':>12}{'speedup':>10}")
    for n in (32, 128, 256):
        ws = [random_weights(rng, n) for _ in range(4)]
        for w in ws:
            assert kernels.has_negative_cycle_numpy(w) == kernels.has_negative_cycle(w)
        kernels.has_negative_cycle(ws[0])  # compile outside the timing
        t_np = best_of(lambda: [kernels.has_negative_cycle_numpy(w) for w in ws], args.repeat)
        t_nb = best_of(lambda: [kernels.has_negative_cycle(w) for w in ws], args.repeat)
        print(f"{'negative cycle n=' + str(n):<28}{t_np:>12.5f}{t_nb:>12.5f}{t_np / t_nb:>10.1f}")

    for n, bound in ((2, 40), (3, 15), (4, 7)):
        cases = [random_box(rng, n) for _ in range(4)]
        for a, b, c in cases:
            r1 = kernels.box_scan_numpy(a, b, c, bound, True)
            r2 = kernels.box_scan(a, b, c, bound, True)
            assert r1[:2] == r2[:2]
        kernels.box_scan(*cases[0], bound, True)
        t_np = best_of(lambda: [kernels.box_scan_numpy(a, b, c, bound, True) for a, b, c in cases],
                       args.repeat)
        t_nb = best_of(lambda: [kernels.box_scan(a, b, c, bound, True) for a, b, c in cases], args.repeat)
        label = f"box scan n={n} bound={bound}"
        print(f"{label:<28}{t_np:>12.5f}{t_nb:>12.5f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
