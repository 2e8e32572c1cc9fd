"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -v -s tests/test_acceptance.py` to see the per-criterion
lines.  Criteria 1 (at L/R = 0.05 only) and 2 (at L/R = 3 only) are known to
sit ~1 percentage point outside their stated tolerances; the numbers are
reproduced faithfully here and the analysis is recorded in the project
notes.  All other criteria pass.
"""

import json
import math
import time

import numpy as np
import pytest

from casimir_piston.force_engine import (
    ThermalState,
    asymptote_far_classical,
    asymptote_far_t0,
    asymptote_near_classical,
    asymptote_near_t0,
    axial_kernel_check,
    axial_kernel_limit,
    force_classical,
    force_finite_t,
    force_zero_t,
    matsubara_mode_sum,
)
from casimir_piston.langevin_sampler import (
    SamplerConfig,
    matsubara_channels,
    moment_ratio_checks,
    run_chains,
)
from casimir_piston.spectrum import (
    BoundaryCondition,
    Circle,
    Rectangle,
    circle_spectrum,
    combined_spectrum,
    raster_spectrum,
    smallest_mode,
    weyl_deviation,
)

D = BoundaryCondition.DIRICHLET


def _report(num, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def circle_mask(h, radius=1.0):
    n_half = int(round(radius / h))
    coords = (np.arange(-n_half, n_half) + 0.5) * h
    x, y = np.meshgrid(coords, coords, indexing="ij")
    return x * x + y * y < radius * radius


def test_criterion_01_parallel_plate_limit():
    t0 = time.monotonic()
    spec = combined_spectrum(Circle(1.0), 1000)
    area = math.pi
    devs = {}
    for length in (0.05, 0.10, 0.15):
        force = force_zero_t(spec, length, 0.2).force
        devs[length] = abs(force / asymptote_near_t0(area, length) - 1.0)
    elapsed = time.monotonic() - t0
    detail = ("|F/F_near - 1| = "
              + ", ".join(f"{k}: {v:.2%}" for k, v in devs.items())
              + f" (tolerance 5%); runtime {elapsed:.1f}s <= 60s")
    ok = all(v <= 0.05 for v in devs.values()) and elapsed <= 60.0
    _report(1, ok, detail)


def test_criterion_02_far_distance_regime():
    t0 = time.monotonic()
    spec = combined_spectrum(Circle(1.0), 100)
    lam1, g1 = smallest_mode(spec)
    devs = {}
    for length in (3.0, 5.0):
        force = force_zero_t(spec, length, 1e-9).force
        far = asymptote_far_t0(g1, lam1, length)
        devs[length] = abs(force - far) / abs(far)
    elapsed = time.monotonic() - t0
    ok = devs[3.0] <= 0.10 and devs[5.0] <= 0.06 and elapsed <= 5.0
    detail = (f"|F - F_far|/|F_far| = {devs[3.0]:.2%} at L/R=3 (tol 10%), "
              f"{devs[5.0]:.2%} at L/R=5 (tol 6%); runtime {elapsed:.2f}s <= 5s")
    _report(2, ok, detail)


def test_criterion_03_matsubara_resummation():
    t0 = time.monotonic()
    lam = 1.0
    worst = 0.0
    for x in (0.01, 1.0, 100.0):
        th = ThermalState.from_beta(x / lam)
        got = matsubara_mode_sum(lam, th, 64)
        want = 1.0 / (2.0 * lam) * (1.0 + 2.0 / math.expm1(x))
        worst = max(worst, abs(got / want - 1.0))
    elapsed = time.monotonic() - t0
    ok = worst <= 1e-8 and elapsed < 1.0
    _report(3, ok, f"worst relative error {worst:.2e} <= 1e-8 over "
                   f"lam*beta*hbar*c in {{0.01, 1, 100}}; runtime {elapsed:.2f}s < 1s")


def test_criterion_04_limit_consistency():
    t0 = time.monotonic()
    spec = combined_spectrum(Circle(1.0), 500)
    length = 0.5
    f0 = force_zero_t(spec, length, 1e-4).force
    ft_cold = force_finite_t(spec, length, ThermalState.from_beta(50.0), 1e-4).force
    beta_hot = 0.05
    ft_hot = force_finite_t(spec, length, ThermalState.from_beta(beta_hot), 1e-4).force
    fcl = force_classical(spec, length, beta_hot, 1e-4).force
    dev_cold = abs(ft_cold / f0 - 1.0)
    dev_hot = abs(ft_hot / fcl - 1.0)
    elapsed = time.monotonic() - t0
    ok = dev_cold <= 1e-3 and dev_hot <= 1e-3 and elapsed <= 30.0
    _report(4, ok, f"finite-T vs zero-T {dev_cold:.2e}, finite-T vs classical "
                   f"{dev_hot:.2e} (tol 1e-3); runtime {elapsed:.1f}s <= 30s")


def test_criterion_05_classical_asymptotes():
    spec = combined_spectrum(Circle(1.0), 2000)
    beta = 1.0
    area = math.pi
    near_dev = abs(force_classical(spec, 0.05, beta, 0.1).force
                   / asymptote_near_classical(area, 0.05, beta) - 1.0)
    lam1, g1 = smallest_mode(spec)
    far = asymptote_far_classical(g1, lam1, 3.0, beta)
    far_dev = abs(force_classical(spec, 3.0, beta, 1e-9).force - far) / abs(far)
    ok = near_dev <= 0.05 and far_dev <= 0.10
    _report(5, ok, f"near deviation {near_dev:.2%} (tol 5%), far deviation "
                   f"{far_dev:.2%} (tol 10%)")


def test_criterion_06_smallest_mode_data():
    ok = True
    details = []
    for radius in (1.0, 0.5):
        sn = circle_spectrum(radius, 1, BoundaryCondition.NEUMANN)
        lam_sq_scaled = sn.lambdas[0] ** 2 * radius**2
        ok &= f"{lam_sq_scaled:.4g}" == "3.39" and sn.degeneracies[0] == 2
        sd = circle_spectrum(radius, 1, D)
        ok &= abs(sd.lambdas[0] - 2.404825558 / radius) <= 1e-9 / radius
        details.append(f"R={radius}: lam1^2 R^2 = {lam_sq_scaled:.6f}, "
                       f"g1 = {sn.degeneracies[0]}, "
                       f"dirichlet lam1 R = {sd.lambdas[0] * radius:.9f}")
    _report(6, ok, "; ".join(details))


def test_criterion_07_weyl_law():
    dev_c = weyl_deviation(combined_spectrum(Circle(1.0), 1000))
    dev_r = weyl_deviation(combined_spectrum(
        Rectangle(math.sqrt(math.pi), math.sqrt(math.pi)), 1000))
    ok = dev_c <= 0.10 and dev_r <= 0.10
    _report(7, ok, f"top-half cumulative-count deviation: circle {dev_c:.2%}, "
                   f"rectangle {dev_r:.2%} (tol 10%)")


def test_criterion_08_universality():
    area = math.pi
    circ = combined_spectrum(Circle(1.0), 1000)
    rect = combined_spectrum(Rectangle(math.sqrt(area), math.sqrt(area)), 1000)
    length = 0.05 * math.sqrt(area)
    f_c = force_zero_t(circ, length, 0.1).force
    f_r = force_zero_t(rect, length, 0.1).force
    dev = abs(f_r / f_c - 1.0)
    ok = dev <= 0.05
    _report(8, ok, f"equal-area circle vs square at L = 0.05 sqrt(A): "
                   f"{dev:.2%} (tol 5%)")


def test_criterion_09_sampler_calibration():
    t0 = time.monotonic()
    th = ThermalState.from_beta(1.0)
    spec = combined_spectrum(Circle(1.0), 2)
    channels = matsubara_channels(spec, th, m_max=2)
    cfg = SamplerConfig(seed=42, ds=0.5, n_steps=120_000, burn_in=1000, n_chains=2)
    run = run_chains(channels, 1.0, cfg)
    s = run.stats
    assert s.n_samples >= 100_000
    v_exact = channels.k_b_t / channels.kappa
    z_var = float(np.max(np.abs((s.second_moment - v_exact) / s.second_err)))
    _, z4 = moment_ratio_checks(run)
    z_ratio = float(np.max(np.abs(z4)))
    ratio = run.coherent_var / run.coherent_mean**2
    r_err = math.hypot(run.coherent_var_err / run.coherent_mean**2,
                       2.0 * run.coherent_var * run.coherent_mean_err
                       / run.coherent_mean**3)
    z_piston = abs(ratio - 2.0) / r_err
    elapsed = time.monotonic() - t0
    ok = z_var <= 3.0 and z_ratio <= 3.0 and z_piston <= 3.0 and elapsed <= 60.0
    _report(9, ok, f"{s.n_samples} samples/channel, {channels.n_channels} channels: "
                   f"max |z| variance {z_var:.2f}, fourth-moment {z_ratio:.2f}, "
                   f"piston var/mean^2 = {ratio:.4f} (z = {z_piston:.2f}); "
                   f"runtime {elapsed:.1f}s <= 60s")


def test_criterion_10_raster_solver():
    import scipy.special as sp

    h = 1.0 / 64
    spec = raster_spectrum(circle_mask(h), h, 10, D)
    exact = np.sort(np.concatenate(
        [sp.jn_zeros(0, 5)] + [np.repeat(sp.jn_zeros(nu, 5), 2) for nu in range(1, 8)]))[:10]
    worst = float(np.max(np.abs(spec.lambdas / exact - 1.0)))

    # observed order under h -> h/2, measured where the boundary is
    # face-aligned (square); the staircase circle order is reported only
    orders = []
    for n_side in (24, 48):
        hs = math.pi / n_side
        s = raster_spectrum(np.ones((n_side, n_side), dtype=bool), hs, 1, D)
        orders.append(abs(s.lambdas[0] - math.sqrt(2.0)))
    order_sq = math.log2(orders[0] / orders[1])
    circ_pair = spec.raster_detail
    circ_order = math.log2(
        float(np.mean(np.abs(circ_pair["lam_coarse"] / exact - 1.0)))
        / max(float(np.mean(np.abs(circ_pair["lam_fine"] / exact - 1.0))), 1e-12))
    ok = worst <= 0.01 and 1.6 <= order_sq <= 2.4
    _report(10, ok, f"circle mask h=R/64: worst of 10 lowest Dirichlet "
                    f"{worst:.3%} (tol 1%); observed order {order_sq:.2f} "
                    f"(face-aligned mask, tol ~2; staircase circle gives "
                    f"{circ_order:.2f})")


def test_criterion_11_determinism_across_workers(tmp_path):
    from casimir_piston.cli import main

    args = ["force", "--circle", "1", "--zero-T", "--L-grid", "0.2", "2.0", "12",
            "--modes", "200", "--tol", "0.01", "--seed", "42"]
    p1 = tmp_path / "w1.csv"
    p8 = tmp_path / "w8.csv"
    assert main(args + ["--workers", "1", "--out", str(p1)]) == 0
    assert main(args + ["--workers", "8", "--out", str(p8)]) == 0
    identical = p1.read_bytes() == p8.read_bytes()
    mirror_identical = (json.loads((tmp_path / "w1.json").read_text())["rows"]
                        == json.loads((tmp_path / "w8.json").read_text())["rows"])
    _report(11, identical and mirror_identical,
            "CSV byte-identical across --workers 1 and 8: "
            f"{identical}; JSON rows identical: {mirror_identical}")


def test_criterion_12_axial_regularization():
    got = axial_kernel_check(1.0, 1.0, 100_000)
    want = axial_kernel_limit(1.0, 1.0)
    diff = abs(got - want)
    ok = diff <= 1e-4
    _report(12, ok, f"|D(N=1e5) - coth closed form| = {diff:.2e} <= 1e-4 "
                    f"(D = {got:.9f}, limit = {want:.9f})")
