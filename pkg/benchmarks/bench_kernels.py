#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot kernels behind the signed-rank statistic and its trace
estimator at simulation-grid sizes, plus one full per-replication test
evaluation. Run directly:

    python benchmarks/bench_kernels.py [--repeats 20]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hdloc import _kernels_numpy as knp
from hdloc.core_math import ScatterSpec
from hdloc.samplers import MeanSpec, ScenarioSpec, sample

try:
    from hdloc import _kernels_numba as knb
except ImportError:
    knb = None

SIZES = ((30, 100), (40, 200), (40, 400), (60, 800))


def _time(fn, repeats):
    fn()  # warm-up (and numba compilation)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def _gram_invr(X):
    W = X @ X.T
    d = np.diag(W).copy()
    d2 = d[:, None] + d[None, :] - 2.0 * W
    np.fill_diagonal(d2, 0.0)
    invr = np.zeros_like(d2)
    pos = d2 > 0.0
    invr[pos] = 1.0 / np.sqrt(d2[pos])
    return W, invr


def bench(repeats: int) -> None:
    spec_fmt = "{:>9} {:>7} {:>14} {:>14} {:>9}"
    print(spec_fmt.format("kernel", "n x p", "numpy [ms]", "numba [ms]", "speedup"))
    for n, p in SIZES:
        spec = ScenarioSpec.normal(ScatterSpec.toeplitz(0.5, p))
        X = sample(spec, MeanSpec("null", 0.0, p), n, 12345)
        W, invr = _gram_invr(X)
        i0 = n // 2
        rows = [
            ("sr_core", lambda m=knp: m.sr_fast_core(X),
             None if knb is None else (lambda m=knb: m.sr_fast_core(X))),
            ("trace_red", lambda m=knp: m.cross_quad_reduced(W, invr, i0),
             None if knb is None else (lambda m=knb: m.cross_quad_reduced(W, invr, i0))),
        ]
        if n <= 40:
            rows.append(("trace_full", lambda m=knp: m.cross_quad_full(W, invr),
                         None if knb is None else (lambda m=knb: m.cross_quad_full(W, invr))))
        for name, f_np, f_nb in rows:
            t_np = _time(f_np, repeats) * 1e3
            if f_nb is None:
                print(spec_fmt.format(name, f"{n}x{p}", f"{t_np:.3f}", "n/a", "n/a"))
            else:
                t_nb = _time(f_nb, repeats) * 1e3
                print(spec_fmt.format(name, f"{n}x{p}", f"{t_np:.3f}", f"{t_nb:.3f}",
                                      f"{t_np / t_nb:.1f}x"))


def bench_replication(repeats: int) -> None:
    from hdloc import stats

    print("\nfull per-replication evaluation (cq + ss + sr, reduced trace):")
    for n, p in ((30, 100), (40, 400)):
        spec = ScenarioSpec.normal(ScatterSpec.toeplitz(0.5, p))
        X = sample(spec, MeanSpec("null", 0.0, p), n, 999)

        def one_rep():
            stats.cq_test(X)
            stats.ss_test(X)
            stats.sr_test(X)

        print(f"  n={n} p={p}: {1e3 * _time(one_rep, repeats):.2f} ms "
              f"(active backend: {__import__('hdloc.kernels', fromlist=['BACKEND']).BACKEND})")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=20)
    args = ap.parse_args()
    bench(args.repeats)
    bench_replication(args.repeats)
