#!/usr/bin/env python3
"""Benchmark the hot kernels on both backends.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Times the exhaustive Rademacher-chaos reduction (the inner loop of the
decoupled fluctuations and the chaos MGF checks) and the SMP trial kernel,
numba against pure numpy.  The first numba call is excluded (JIT compile).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from chi_contract import _kernels_numpy as knp

try:
    from chi_contract import _kernels_numba as knb
    HAVE_NUMBA = True
except ImportError:
    knb = None
    HAVE_NUMBA = False


def timeit(fn, repeats):
    fn()                       # warm up / compile
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_chaos(repeats):
    rng = np.random.default_rng(0)
    print("\ncosh_chaos_logmeanexp (exhaustive {-1,+1}^dim reduction)")
    print(f"{'dim':>4} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for dim in (10, 14, 18, 20):
        A = rng.normal(size=(dim, dim)) * 0.1
        t_np = timeit(lambda: knp.cosh_chaos_logmeanexp(A), repeats)
        if HAVE_NUMBA:
            t_nb = timeit(lambda: knb.cosh_chaos_logmeanexp(A), repeats)
            v_np = knp.cosh_chaos_logmeanexp(A)
            v_nb = knb.cosh_chaos_logmeanexp(A)
            assert abs(v_np - v_nb) < 1e-9, (v_np, v_nb)
            print(f"{dim:>4} {t_np:>11.4f}s {t_nb:>11.4f}s {t_np / t_nb:>8.2f}x")
        else:
            print(f"{dim:>4} {t_np:>11.4f}s {'n/a':>12}")


def bench_smp(repeats):
    rng = np.random.default_rng(1)
    print("\nsmp_trials (counter-driven protocol simulation)")
    print(f"{'trials':>8} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    k, m, n_cand, players = 8, 4, 4, 3
    cum_w = np.stack([np.cumsum(
        (lambda raw: raw / raw.sum(0, keepdims=True))(
            rng.gamma(1.0, 1.0, (m, k))), axis=0) for _ in range(n_cand)])
    cum_w[:, -1, :] = 1.0
    for trials in (10_000, 100_000, 1_000_000):
        cdf = np.broadcast_to(np.cumsum(np.full(k, 1.0 / k)), (trials, k)).copy()
        cdf[:, -1] = 1.0
        t_np = timeit(lambda: knp.smp_trials(7, 1, players, cum_w, cdf, False),
                      repeats)
        if HAVE_NUMBA:
            t_nb = timeit(lambda: knb.smp_trials(7, 1, players, cum_w, cdf, False),
                          repeats)
            a = knp.smp_trials(7, 1, players, cum_w, cdf, False)[0]
            b = knb.smp_trials(7, 1, players, cum_w, cdf, False)[0]
            assert np.array_equal(a, b)
            print(f"{trials:>8} {t_np:>11.4f}s {t_nb:>11.4f}s {t_np / t_nb:>8.2f}x")
        else:
            print(f"{trials:>8} {t_np:>11.4f}s {'n/a':>12}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    print(f"numba available: {HAVE_NUMBA}")
    bench_chaos(args.repeats)
    bench_smp(args.repeats)


if __name__ == "__main__":
    main()
