import math

import numpy as np
import pytest
import scipy.special as sp
from scipy.integrate import quad

from casimir_piston.special_functions import (
    DERIVATIVE_ZERO,
    FUNCTION_ZERO,
    ZeroList,
    bessel_j,
    bessel_j_prime,
    bessel_j_prime_zeros,
    bessel_j_zeros,
    bessel_k,
    zeros_up_to,
)


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

def series_j(nu, x, terms=80):
    """Plain ascending power series, used only as a test oracle."""
    term = (0.5 * x) ** nu / math.factorial(nu)
    total = term
    for k in range(1, terms):
        term *= -0.25 * x * x / (k * (nu + k))
        total += term
    return total


def bisect_root(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# first zeros from the series oracle, frozen after computing them there
J0_ZERO_1 = 2.404825557695773
J1_ZERO_1 = 3.8317059702075125
JP1_ZERO_1 = 1.8411837813406593
JP2_ZERO_1 = 3.0542369282271404


def test_oracle_reproduces_frozen_zeros():
    assert bisect_root(lambda x: series_j(0, x), 2.0, 3.0) == pytest.approx(
        J0_ZERO_1, abs=1e-12)
    assert bisect_root(lambda x: series_j(1, x), 3.0, 4.5) == pytest.approx(
        J1_ZERO_1, abs=1e-12)
    # J'_nu = (J_{nu-1} - J_{nu+1})/2 in the oracle too
    assert bisect_root(
        lambda x: 0.5 * (series_j(0, x) - series_j(2, x)), 1.0, 2.5,
    ) == pytest.approx(JP1_ZERO_1, abs=1e-12)
    assert bisect_root(
        lambda x: 0.5 * (series_j(1, x) - series_j(3, x)), 2.5, 3.5,
    ) == pytest.approx(JP2_ZERO_1, abs=1e-12)


# ---------------------------------------------------------------------------
# bessel_j
# ---------------------------------------------------------------------------

def test_j_at_origin():
    assert bessel_j(0, 0.0) == 1.0
    for nu in (1, 2, 7):
        assert bessel_j(nu, 0.0) == 0.0


def test_j_first_zero_value():
    assert abs(bessel_j(0, J0_ZERO_1)) < 1e-10


def test_j_against_series_oracle():
    for nu in range(6):
        for x in np.linspace(0.05, 9.5, 40):
            assert bessel_j(nu, float(x)) == pytest.approx(
                series_j(nu, float(x)), abs=5e-14)


@pytest.mark.parametrize("nu", [0, 1, 2, 5, 12, 40, 90])
def test_j_against_scipy_wide_range(nu):
    xs = np.concatenate([np.linspace(0.01, 30.0, 61), np.geomspace(30.0, 900.0, 40)])
    for x in xs:
        envelope = math.sqrt(2.0 / (math.pi * max(x, 1.0)))
        err = abs(bessel_j(nu, float(x)) - sp.jv(nu, x))
        assert err <= 1e-11 * max(abs(sp.jv(nu, x)), envelope)


def test_j_branch_seams_agree_with_reference():
    # series/Miller seam at x = 10 and Miller/Hankel seam at x = 25: both
    # sides of each seam must sit on the same curve to near machine accuracy
    for nu in (0, 1, 3):
        for seam in (10.0, 25.0):
            for x in (seam - 1e-9, seam + 1e-9):
                assert bessel_j(nu, x) == pytest.approx(sp.jv(nu, x), abs=5e-13)


def test_j_random_orders_match_scipy(rng):
    for _ in range(200):
        nu = int(rng.integers(0, 60))
        x = float(rng.uniform(0.0, 150.0))
        envelope = math.sqrt(2.0 / (math.pi * max(x, 1.0)))
        assert abs(bessel_j(nu, x) - sp.jv(nu, x)) <= 1e-11 * max(1e-3, envelope)


def test_j_large_argument_and_order_reference_values():
    # frozen 30-digit references; covers the asymptotic branch, deep Miller
    # recurrence, and the order ~ argument transition region
    refs = {
        (0, 5000.5): -0.0014641610453637385,
        (3, 9876.5): 0.0079722362507698335,
        (120, 450.25): 0.031688574256511859,
        (300, 310.0): 0.057419004509027768,
    }
    for (nu, x), want in refs.items():
        assert bessel_j(nu, x) == pytest.approx(want, rel=1e-11)


def test_j_recurrence_identity():
    # J_{nu-1}(x) + J_{nu+1}(x) = (2 nu / x) J_nu(x)
    for nu in (1, 2, 5, 9):
        for x in np.linspace(0.3, 60.0, 33):
            lhs = bessel_j(nu - 1, float(x)) + bessel_j(nu + 1, float(x))
            rhs = 2.0 * nu / x * bessel_j(nu, float(x))
            scale = max(abs(lhs), abs(rhs), abs(bessel_j(nu, float(x))), 1e-3)
            assert abs(lhs - rhs) <= 1e-10 * scale


def test_j_domain_error():
    with pytest.raises(ValueError):
        bessel_j(0, -1.0)
    with pytest.raises(ValueError):
        bessel_j(-1, 1.0)


def test_j_prime_identity_and_domain():
    for x in (0.5, 2.0, 7.7):
        assert bessel_j_prime(0, x) == pytest.approx(-bessel_j(1, x), rel=1e-13)
        assert bessel_j_prime(3, x) == pytest.approx(sp.jvp(3, x), abs=1e-12)
    with pytest.raises(ValueError):
        bessel_j_prime(0, -0.5)


# ---------------------------------------------------------------------------
# zeros
# ---------------------------------------------------------------------------

def test_first_zeros_match_oracle():
    assert bessel_j_zeros(0, 1).values[0] == pytest.approx(J0_ZERO_1, abs=1e-10)
    assert bessel_j_zeros(1, 1).values[0] == pytest.approx(J1_ZERO_1, abs=1e-10)
    assert bessel_j_prime_zeros(1, 1).values[0] == pytest.approx(JP1_ZERO_1, abs=1e-10)
    assert bessel_j_prime_zeros(2, 1).values[0] == pytest.approx(JP2_ZERO_1, abs=1e-10)


def test_neumann_smallest_eigenvalue_matches_reported_value():
    # square of the first J_1' zero, quoted as 3.39 (3 significant figures)
    lam_sq = bessel_j_prime_zeros(1, 1).values[0] ** 2
    assert f"{lam_sq:.3g}" == "3.39"


def test_jprime0_equals_j1_zeros():
    # J_0' = -J_1, and the trivial x = 0 zero is excluded
    zp = bessel_j_prime_zeros(0, 4).values
    z1 = bessel_j_zeros(1, 4).values
    np.testing.assert_allclose(zp, z1, rtol=0, atol=1e-12)
    assert zp[0] > 1.0


@pytest.mark.parametrize("nu,count", [(0, 30), (1, 20), (7, 15), (23, 10), (64, 6)])
def test_zeros_match_scipy(nu, count):
    mine = bessel_j_zeros(nu, count).values
    np.testing.assert_allclose(mine, sp.jn_zeros(nu, count), rtol=0, atol=1e-9)
    mine_p = bessel_j_prime_zeros(nu, count).values
    np.testing.assert_allclose(mine_p, sp.jnp_zeros(nu, count), rtol=0, atol=1e-9)


def test_zero_residuals_small():
    for nu in (0, 2, 11):
        for z in bessel_j_zeros(nu, 12).values:
            assert abs(bessel_j(nu, float(z))) < 1e-9
        for z in bessel_j_prime_zeros(nu, 12).values:
            assert abs(bessel_j_prime(nu, float(z))) < 1e-9


def test_interlacing():
    z0 = bessel_j_zeros(0, 6).values
    z1 = bessel_j_zeros(1, 6).values
    # j_{0,1} < j_{1,1} < j_{0,2} and so on
    for k in range(5):
        assert z0[k] < z1[k] < z0[k + 1]


def test_derivative_zero_precedes_function_zero():
    for nu in (1, 2, 8):
        assert bessel_j_prime_zeros(nu, 1).values[0] < bessel_j_zeros(nu, 1).values[0]


def test_zerolist_validation_and_len():
    zl = bessel_j_zeros(2, 5)
    assert len(zl) == 5 and zl.kind == FUNCTION_ZERO and zl.order == 2
    with pytest.raises(ValueError):
        ZeroList(0, FUNCTION_ZERO, np.array([2.0, 1.0]))
    with pytest.raises(ValueError):
        ZeroList(0, "bogus", np.array([1.0]))
    with pytest.raises(ValueError):
        bessel_j_zeros(0, 0)


def test_zeros_up_to_cutoff():
    zs = zeros_up_to(3, FUNCTION_ZERO, 20.0)
    ref = sp.jn_zeros(3, 8)
    np.testing.assert_allclose(zs, ref[ref <= 20.0], atol=1e-9)
    assert zeros_up_to(50, DERIVATIVE_ZERO, 10.0).size == 0


# ---------------------------------------------------------------------------
# bessel_k
# ---------------------------------------------------------------------------

def test_k_three_term_recurrence():
    for x in (0.1, 1.0, 10.0):
        lhs = bessel_k(2, x) - bessel_k(0, x) - 2.0 / x * bessel_k(1, x)
        assert abs(lhs) <= 1e-12 * bessel_k(2, x)


def test_k0_against_quadrature_oracle():
    # K_0(x) = int_0^inf exp(-x cosh t) dt
    for x in (0.3, 1.0, 2.5, 8.0):
        oracle, err = quad(lambda t: math.exp(-x * math.cosh(t)), 0.0, 40.0,
                           epsabs=1e-15, epsrel=1e-13)
        assert err < 1e-12 * oracle
        assert bessel_k(0, x) == pytest.approx(oracle, rel=1e-11)
    assert bessel_k(0, 1.0) == pytest.approx(0.4210244382407084, rel=1e-12)


def test_k_leading_asymptotics():
    # scaled K_0 approaches 1 like 1/(8x): 2.5e-3 at x = 50, 2.5e-4 at x = 500
    for x, bound in ((50.0, 3e-3), (500.0, 3e-4)):
        scaled = bessel_k(0, x) * math.exp(x) * math.sqrt(2.0 * x / math.pi)
        assert scaled == pytest.approx(1.0, abs=bound)
        two_term = 1.0 - 1.0 / (8.0 * x) + 9.0 / (128.0 * x * x)
        assert abs(scaled - two_term) < 1e-6


@pytest.mark.parametrize("alpha", [0, 1, 2])
def test_k_accuracy_against_scipy(alpha):
    xs = np.geomspace(1e-6, 1.999, 120)
    ref = sp.kn(alpha, xs)
    mine = np.array([bessel_k(alpha, float(x)) for x in xs])
    np.testing.assert_allclose(mine, ref, rtol=1e-12)
    # scaled comparison above x = 2 (scipy's unscaled kn underflows near 700)
    xs = np.linspace(2.0, 700.0, 200)
    ref = sp.kve(alpha, xs)
    mine = np.array([bessel_k(alpha, float(x)) * math.exp(float(x)) for x in xs])
    np.testing.assert_allclose(mine, ref, rtol=1e-12)


def test_k_positive_and_decreasing():
    xs = np.geomspace(1e-4, 300.0, 200)
    for alpha in (0, 1, 2):
        vals = np.array([bessel_k(alpha, float(x)) for x in xs])
        assert np.all(vals > 0.0)
        assert np.all(np.diff(vals) < 0.0)


def test_k_graceful_underflow():
    assert bessel_k(0, 900.0) == 0.0
    assert bessel_k(2, 2000.0) == 0.0


def test_k_domain_errors():
    with pytest.raises(ValueError):
        bessel_k(0, 0.0)
    with pytest.raises(ValueError):
        bessel_k(0, -2.0)
    with pytest.raises(ValueError):
        bessel_k(3, 1.0)
