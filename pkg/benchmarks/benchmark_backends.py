#!/usr/bin/env python3
"""Timing comparison of the numba and numpy kernel backends.

Run directly:  python benchmarks/benchmark_backends.py
Covers the four hot paths: Bessel J evaluation (spectrum construction),
K0+K2 evaluation (T = 0 force), OU chain updates (sampler), and the axial
cutoff sums.
"""

import time

import numpy as np

from casimir_piston import backend
from casimir_piston.force_engine import force_zero_t
from casimir_piston.langevin_sampler import SamplerConfig, matsubara_channels, run_chains
from casimir_piston.force_engine import ThermalState
from casimir_piston.spectrum import Circle, combined_spectrum


def time_call(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(name):
    backend.use(name)
    results = {}

    xs = np.linspace(0.1, 120.0, 200_000)
    backend.bessel_j_many(7, xs[:16])  # warm compile before timing
    results["bessel_j_many (200k pts)"] = time_call(
        lambda: backend.bessel_j_many(7, xs))

    zs = np.geomspace(1e-3, 600.0, 1_000_000)
    backend.k0k2_many(zs[:16])
    results["k0k2_many (1M pts)"] = time_call(lambda: backend.k0k2_many(zs))

    results["circle spectrum (500/set)"] = time_call(
        lambda: combined_spectrum(Circle(1.0), 500), repeat=1)

    spec = combined_spectrum(Circle(1.0), 500)
    results["force_zero_t sweep (20 L)"] = time_call(
        lambda: [force_zero_t(spec, length, 0.5)
                 for length in np.geomspace(0.08, 3.0, 20)])

    th = ThermalState.from_beta(1.0)
    channels = matsubara_channels(combined_spectrum(Circle(1.0), 4), th, 3)
    cfg = SamplerConfig(seed=1, ds=0.5, n_steps=100_000, burn_in=500, n_chains=1)
    run_chains(channels, 1.0,
               SamplerConfig(seed=1, ds=0.5, n_steps=2000, burn_in=100, n_chains=1))
    results["ou chains (100k x 63 ch)"] = time_call(
        lambda: run_chains(channels, 1.0, cfg), repeat=1)

    backend.axial_partial_sum(1.0, 1.0, 1000)
    results["axial sum (1M terms)"] = time_call(
        lambda: backend.axial_partial_sum(1.0, 1.0, 1_000_000))
    return results


def main():
    names = backend.available_backends()
    all_results = {name: bench(name) for name in names}
    keys = list(next(iter(all_results.values())))
    width = max(len(k) for k in keys)
    header = f"{'kernel':<{width}}" + "".join(f"  {n:>12}" for n in names)
    if len(names) == 2:
        header += f"  {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for key in keys:
        row = f"{key:<{width}}"
        for name in names:
            row += f"  {all_results[name][key] * 1e3:>10.2f}ms"
        if len(names) == 2:
            a, b = (all_results[n][key] for n in names)
            row += f"  {a / b:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
