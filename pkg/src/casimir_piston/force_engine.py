"""Regularized Casimir forces on a piston plate from a transverse spectrum.

Implements the three equivalent routes: the finite-temperature Matsubara
form, the T = 0 modified-Bessel image sum, and the classical (m = 0) limit,
plus the closed-form near/far asymptotes and the force-fluctuation variance.
Every summand is individually finite; there is no ultraviolet cutoff
anywhere — truncation is adaptive with an explicit tail estimate.

Internal units are natural (hbar = c = k_B = 1 unless passed explicitly).
Sign convention: the force is along the outward axis of the gap, negative
values meaning the plates attract.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import backend

ZETA_3 = 1.2020569031595942854  # Apery's constant

REGIMES = ("finite-T", "zero-T", "classical", "asymptote-near", "asymptote-far")

_LOG_EPS = 37.0          # e^-37 ~ 8.5e-17: machine-level truncation of image/Matsubara sums
_K_DEAD = 746.0          # K_a underflows beyond this argument
_TAIL_GRID = 1025        # quadrature nodes for the Weyl tail estimate
_M_CHUNK = 512           # Matsubara block size (memory bound: n_modes x chunk)


class ToleranceUnreachable(RuntimeError):
    """Requested tolerance cannot be met with the provided spectrum.

    Carries the partial result (with its honest tail estimate) in `.result`.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class ThermalState:
    """Inverse temperature and unit constants; beta = inf means T = 0.

    Lambda = 2 pi / (beta hbar c) is the inverse thermal wavelength (0 at
    T = 0); k_B is absorbed into beta.
    """

    beta: float = math.inf
    hbar: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not self.beta > 0.0:
            raise ValueError("beta must be positive (inf for T = 0)")
        if self.hbar <= 0.0 or self.c <= 0.0:
            raise ValueError("hbar and c must be positive")

    @property
    def Lambda(self):
        if math.isinf(self.beta):
            return 0.0
        return 2.0 * math.pi / (self.beta * self.hbar * self.c)

    @property
    def k_b_t(self):
        return 0.0 if math.isinf(self.beta) else 1.0 / self.beta

    @classmethod
    def zero_temperature(cls, hbar=1.0, c=1.0):
        return cls(beta=math.inf, hbar=hbar, c=c)

    @classmethod
    def from_beta(cls, beta, hbar=1.0, c=1.0):
        return cls(beta=beta, hbar=hbar, c=c)

    @classmethod
    def from_temperature(cls, temperature, hbar=1.0, c=1.0, k_b=1.0):
        if temperature < 0.0:
            raise ValueError("temperature must be >= 0")
        if temperature == 0.0:
            return cls(beta=math.inf, hbar=hbar, c=c)
        return cls(beta=1.0 / (k_b * temperature), hbar=hbar, c=c)


@dataclass(frozen=True)
class ForceResult:
    force: float
    n_modes_used: int
    m_cutoff: int
    tail_estimate: float
    regime: str


def _validate_geometry(length, tol):
    if length <= 0.0:
        raise ValueError("plate separation L must be positive")
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")


def matsubara_mode_sum(lam, th, m_max):
    """(1/beta) sum_{|m| <= m_max} 1/(lam^2 + omega_m^2) plus an analytic
    Euler-Maclaurin tail for |m| > m_max.

    Equals (hbar c / 2 lam) [1 + 2/(e^{beta hbar c lam} - 1)] to better than
    1e-8 relative once m_max >= ~32.
    """
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    if math.isinf(th.beta):
        raise ValueError("beta is infinite; use the zero-temperature route")
    lam2 = lam * lam
    big_l = th.Lambda
    m = np.arange(1, m_max + 1)
    partial = 1.0 / lam2 + 2.0 * math.fsum((1.0 / (lam2 + (m * big_l) ** 2)).tolist())
    # Euler-Maclaurin tail of 2 sum_{m > m_max} f(m), f(x) = 1/(lam^2 + Lambda^2 x^2)
    x0 = m_max + 1.0
    u = lam2 + (big_l * x0) ** 2
    f = 1.0 / u
    fp = -2.0 * big_l**2 * x0 / u**2
    f3 = 24.0 * big_l**4 * x0 / u**3 - 48.0 * big_l**6 * x0**3 / u**4
    integral = (math.pi / 2.0 - math.atan(x0 * big_l / lam)) / (lam * big_l)
    tail = integral + 0.5 * f - fp / 12.0 + f3 / 720.0
    return (partial + 2.0 * tail) / th.beta


def matsubara_closed_form(lam, th):
    """Closed form of the resummed Matsubara series: (hbar c/2 lam) times the
    quantum occupation bracket."""
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    hc = th.hbar * th.c
    if math.isinf(th.beta):
        return hc / (2.0 * lam)
    return hc / (2.0 * lam) * (1.0 + 2.0 / math.expm1(th.beta * hc * lam))


def _image_sums_zero_t(lam, length):
    """Per-mode image sums S_p = sum_n [K0 + K2](2 n L lam_p), truncated at
    machine level (geometric decay), and the largest image index used."""
    z1 = 2.0 * length * lam
    n_img = np.maximum(1, np.ceil(_LOG_EPS / z1)).astype(np.int64)
    n_img = np.minimum(n_img, (np.floor(_K_DEAD / z1)).astype(np.int64) + 1)
    starts = np.concatenate(([0], np.cumsum(n_img)[:-1]))
    total = int(n_img.sum())
    within = np.arange(total) - np.repeat(starts, n_img) + 1
    z = np.repeat(z1, n_img) * within
    vals = backend.k0k2_many(z)
    return np.add.reduceat(vals, starts), int(n_img.max())


def _weyl_tail(spec, length, kernel):
    """Estimate of the force contribution of modes beyond the spectrum, from
    the 2D Weyl density rho = A lam / (2 pi) per BC set.  `kernel(lams)` maps
    eigenvalues to the per-mode force kernel (everything but the density)."""
    tail = 0.0
    span = 45.0 / (2.0 * length)
    for bc in spec.boundary_conditions():
        sub_max = float(np.max(spec.lambdas[[b is bc for b in spec.bcs]]))
        xs = np.linspace(sub_max, sub_max + span, _TAIL_GRID)
        rho = spec.area * xs / (2.0 * math.pi)
        tail += float(np.trapezoid(rho * kernel(xs), xs))
    return tail


def force_zero_t(spec, length, tol, *, hbar=1.0, c=1.0):
    """T = 0 Casimir force from the modified-Bessel image sum.

    F = -(hbar c / 2 pi) sum_p g_p lam_p^2 sum_{n>=1} [K0 + K2](2 n L lam_p),
    image sums truncated when terms underflow, modes accumulated in
    ascending order with exact (Shewchuk) summation.
    """
    _validate_geometry(length, tol)
    lam = spec.lambdas
    g = spec.degeneracies.astype(np.float64)
    pref = hbar * c / (2.0 * math.pi)
    sums, n_img_max = _image_sums_zero_t(lam, length)
    force = -math.fsum((pref * g * lam * lam * sums).tolist())

    def kernel(xs):
        s, _ = _image_sums_zero_t(xs, length)
        return pref * xs * xs * s

    tail = -_weyl_tail(spec, length, kernel)
    result = ForceResult(force, spec.total_count, n_img_max, tail, "zero-T")
    if abs(tail) > tol * abs(force):
        raise ToleranceUnreachable(
            f"spectrum tail estimate {tail:.3e} exceeds tol*|F| = "
            f"{tol * abs(force):.3e}; more modes needed", result)
    return result


# conventional-capitalization alias
force_zero_T = force_zero_t


def _matsubara_kernel(lam, length, big_l, m_max):
    """sum over m in Z of q/(e^{2Lq} - 1), q = sqrt(m^2 Lambda^2 + lam^2),
    vectorized over modes with the |m| >= 1 part chunked."""
    with np.errstate(over="ignore"):
        out = lam / np.expm1(2.0 * length * lam)
        for m0 in range(1, m_max + 1, _M_CHUNK):
            m = np.arange(m0, min(m_max, m0 + _M_CHUNK - 1) + 1, dtype=np.float64)
            q = np.sqrt(lam[:, None] ** 2 + (m[None, :] * big_l) ** 2)
            term = q / np.expm1(2.0 * length * q)
            out = out + 2.0 * term.sum(axis=1)
    return out


def force_finite_t(spec, length, th, tol):
    """Finite-temperature force, Matsubara form:
    F = -(1/beta) sum_p g_p sum_{m in Z} q/(e^{2Lq} - 1)."""
    _validate_geometry(length, tol)
    if math.isinf(th.beta):
        raise ValueError("beta is infinite; use force_zero_t")
    big_l = th.Lambda
    m_max = max(1, int(math.ceil(_LOG_EPS / (2.0 * length * big_l))) + 1)
    if m_max > 2_000_000:
        raise ValueError(
            f"Lambda*L = {big_l * length:.3e} needs {m_max} Matsubara terms; "
            "this is effectively T = 0, use force_zero_t")
    lam = spec.lambdas
    g = spec.degeneracies.astype(np.float64)
    per_mode = _matsubara_kernel(lam, length, big_l, m_max)
    force = -math.fsum((g * per_mode).tolist()) / th.beta
    tail = -_weyl_tail(spec, length,
                       lambda xs: _matsubara_kernel(xs, length, big_l, m_max)) / th.beta
    result = ForceResult(force, spec.total_count, m_max, tail, "finite-T")
    if abs(tail) > tol * abs(force):
        raise ToleranceUnreachable(
            f"spectrum tail estimate {tail:.3e} exceeds tol*|F| = "
            f"{tol * abs(force):.3e}; more modes needed", result)
    return result


force_finite_T = force_finite_t


def force_classical(spec, length, beta, tol):
    """Classical (hbar -> 0) force: F = -(1/beta) sum_p g_p lam_p/(e^{2L lam_p} - 1)."""
    _validate_geometry(length, tol)
    if not beta > 0.0 or math.isinf(beta):
        raise ValueError("beta must be positive and finite")
    lam = spec.lambdas
    g = spec.degeneracies.astype(np.float64)
    with np.errstate(over="ignore"):
        per_mode = lam / np.expm1(2.0 * length * lam)
    force = -math.fsum((g * per_mode).tolist()) / beta

    def kernel(xs):
        with np.errstate(over="ignore"):
            return xs / np.expm1(2.0 * length * xs)

    tail = -_weyl_tail(spec, length, kernel) / beta
    result = ForceResult(force, spec.total_count, 0, tail, "classical")
    if abs(tail) > tol * abs(force):
        raise ToleranceUnreachable(
            f"spectrum tail estimate {tail:.3e} exceeds tol*|F| = "
            f"{tol * abs(force):.3e}; more modes needed", result)
    return result


def asymptote_near_t0(area, length, *, hbar=1.0, c=1.0):
    """Infinite-parallel-plates limit, L much smaller than the cross section."""
    if area <= 0.0 or length <= 0.0:
        raise ValueError("area and L must be positive")
    return -hbar * c * math.pi**2 * area / (240.0 * length**4)


def asymptote_far_t0(g1, lambda1, length, *, hbar=1.0, c=1.0):
    """Far-distance limit: only the smallest eigenvalue survives."""
    if lambda1 <= 0.0 or length <= 0.0:
        raise ValueError("lambda1 and L must be positive")
    return (-hbar * c / (2.0 * math.sqrt(math.pi * length))
            * g1 * lambda1**1.5 * math.exp(-2.0 * length * lambda1))


def asymptote_near_classical(area, length, beta):
    if area <= 0.0 or length <= 0.0 or beta <= 0.0:
        raise ValueError("area, L and beta must be positive")
    return -ZETA_3 * area / (4.0 * beta * math.pi * length**3)


def asymptote_far_classical(g1, lambda1, length, beta):
    if lambda1 <= 0.0 or length <= 0.0 or beta <= 0.0:
        raise ValueError("lambda1, L and beta must be positive")
    return -g1 * lambda1 * math.exp(-2.0 * length * lambda1) / beta


# conventional-capitalization aliases
asymptote_near_T0 = asymptote_near_t0
asymptote_far_T0 = asymptote_far_t0


def axial_kernel_check(q, length, n_x):
    """Cutoff difference of the axial mode sums at separations L and L' = 10 L
    with matched spectral cutoff (N' = 10 N covers the same k range):

        D = (2/L) sum_{n<=N} k^2/(Q^2+k^2) - (2/L') sum_{n<=N'} k'^2/(Q^2+k'^2).

    The divergent 2N/L parts cancel exactly; D converges to the closed form
    returned by axial_kernel_limit.
    """
    if q <= 0.0 or length <= 0.0:
        raise ValueError("Q and L must be positive")
    if n_x < 1:
        raise ValueError("N_x must be >= 1")
    return (backend.axial_partial_sum(q, length, n_x)
            - backend.axial_partial_sum(q, 10.0 * length, 10 * n_x))


def axial_kernel_limit(q, length):
    """N -> inf limit of axial_kernel_check, from
    sum_{n>=1} 1/(Q^2 + (n pi/L)^2) = L/(2Q) coth(LQ) - 1/(2Q^2):

        D_inf = -Q [coth(LQ) - coth(L'Q)] + (1/L - 1/L'),   L' = 10 L.
    """
    if q <= 0.0 or length <= 0.0:
        raise ValueError("Q and L must be positive")
    lp = 10.0 * length
    return (-q * (1.0 / math.tanh(length * q) - 1.0 / math.tanh(lp * q))
            + (1.0 / length - 1.0 / lp))


def fluctuation_variance(force):
    """Variance of the fluctuating piston force: sigma_F^2 = 2 F_C^2 for any
    temperature and cross section."""
    return 2.0 * force * force
