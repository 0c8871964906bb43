"""Compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 20000] [--repeat 3]

Checks that both backends return identical arrays, then prints the best
of ``--repeat`` wall times for each kernel.
"""

import argparse
import time

import numpy as np

from bihole_lab.kernels import backends
from bihole_lab.rng import bernoulli_threshold


def best_of(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--delta", type=float, default=64.0)
    ap.add_argument("--coupon-trials", type=int, default=100000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    impls = backends()
    if "compiled" not in impls:
        print("compiled extension not built; only the fallback is available")
    thr = bernoulli_threshold(args.delta / args.n)
    cases = {
        f"gnnp_csr n={args.n}": lambda k: k.gnnp_csr(args.n, thr, 1),
        f"coupon_times q=20 x{args.coupon_trials}": lambda k: k.coupon_times(20, args.coupon_trials, 1),
    }
    results = {}
    for name, impl in impls.items():
        for case, fn in cases.items():
            results[case, name] = best_of(lambda: fn(impl), args.repeat)
        ptr, adj = results[f"gnnp_csr n={args.n}", name][1]
        results["complement_matching", name] = best_of(
            lambda: impl.complement_matching(args.n, ptr, adj), args.repeat)

    print(f"{'kernel':36s} " + " ".join(f"{b:>10s}" for b in impls) + "   speedup")
    for case in list(cases) + ["complement_matching"]:
        row = [results[case, b][0] for b in impls]
        if len(impls) == 2:
            a, b = (results[case, k][1] for k in impls)
            same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
            assert same, f"backends disagree on {case}"
        speed = f"{row[0] / row[1]:8.1f}x" if len(row) == 2 else ""
        print(f"{case:36s} " + " ".join(f"{t:9.3f}s" for t in row) + "  " + speed)


if __name__ == "__main__":
    main()
