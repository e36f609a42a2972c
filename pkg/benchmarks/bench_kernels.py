#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the pure-Python fallback.

Runs each hot kernel on a representative workload and reports best-of-N
wall times plus the speedup.  Usage:

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from workdist._kernels import available_backends


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_workloads():
    rng = np.random.default_rng(1234)

    d = 48
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    herm = 0.5 * (a + a.conj().T)
    off_tol = 1e-14 * float(np.max(np.abs(herm)))

    signal = rng.normal(size=4096) + 1j * rng.normal(size=4096)

    zs = rng.uniform(-6, 6, 20000) + 1j * rng.uniform(-6, 6, 20000)

    n_fock = 60
    g = np.zeros(n_fock + 1)
    g[0] = np.exp(-8.0)
    for n in range(1, n_fock + 1):
        g[n] = g[n - 1] * 4.0 / np.sqrt(n)
    rho = np.outer(g, g).astype(complex)
    xi = (rng.uniform(-8, 8, 4096) + 1j * rng.uniform(-8, 8, 4096))

    return [
        ("jacobi_eigh d=48", lambda k: k.jacobi_eigh(herm, off_tol, 100)),
        ("fft_radix2 n=4096 x20",
         lambda k: [k.fft_radix2(signal, False) for _ in range(20)]),
        ("erf_complex 20k pts", lambda k: k.erf_complex(zs)),
        ("husimi_grid 61x61 rho, 4096 pts", lambda k: k.husimi_grid(rho, xi)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5, help="best-of-N timing")
    args = parser.parse_args()

    backends = available_backends()
    names = sorted(backends)
    print(f"backends: {', '.join(names)}")
    header = f"{'kernel':36s}" + "".join(f"{n:>12s}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))
    for label, work in make_workloads():
        times = {}
        for n in names:
            times[n] = bench(lambda: work(backends[n]), args.repeat)
        row = f"{label:36s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names)
        if len(names) == 2:
            row += f"{times['python'] / times['cython']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
