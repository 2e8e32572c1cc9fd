"""Numba-compiled implementations of the hot numeric kernels.

Scalar algorithms mirroring ``_kernels_numpy``, wrapped in @njit loops.
Selected through :mod:`casimir_piston.backend`; compilation results are
cached on disk.
"""

import math

import numpy as np
from numba import njit

from ._kernels_common import (
    EULER_GAMMA,
    J_HANKEL_TERMS,
    J_HANKEL_XMIN,
    J_MILLER_CBRT,
    J_MILLER_PAD,
    J_SERIES_TERMS,
    J_SERIES_XMAX,
    K0_CHEB,
    K1_CHEB,
    K_SERIES_TERMS,
    K_SERIES_XMAX,
    K_ZERO_XMIN,
)

NAME = "numba"


@njit(cache=True)
def _j_series_s(nu, x):
    half = 0.5 * x
    term = 1.0
    for k in range(1, nu + 1):
        term *= half / k
    s = term
    t = -half * half
    for k in range(1, J_SERIES_TERMS + 1):
        term *= t / (k * (nu + k))
        s += term
    return s


@njit(cache=True)
def _j_miller_s(nu, x):
    mx = x if x > nu else float(nu)
    m = int(mx) + J_MILLER_PAD + int(J_MILLER_CBRT * mx ** (1.0 / 3.0))
    if m % 2 == 1:
        m += 1
    inv_x = 1.0 / x
    u_next = 0.0
    u_curr = 1e-30
    norm = 2.0 * u_curr if (m - 1) % 2 == 0 else 0.0
    tgt = u_curr if (m - 1) == nu else 0.0
    for k in range(m - 1, 0, -1):
        u_prev = (2.0 * k) * inv_x * u_curr - u_next
        u_next = u_curr
        u_curr = u_prev
        kk = k - 1
        if kk == nu:
            tgt = u_curr
        if kk % 2 == 0:
            norm += u_curr if kk == 0 else 2.0 * u_curr
        if abs(u_curr) > 1e250:
            u_curr *= 1e-250
            u_next *= 1e-250
            norm *= 1e-250
            tgt *= 1e-250
    return tgt / norm


@njit(cache=True)
def _j_hankel_s(nu, x):
    mu = 4.0 * nu * nu
    inv8x = 1.0 / (8.0 * x)
    term = 1.0
    p = 1.0
    q = 0.0
    for k in range(1, J_HANKEL_TERMS):
        term *= (mu - (2 * k - 1) ** 2) * inv8x / k
        if k % 2 == 1:
            s = 1.0 if ((k - 1) // 2) % 2 == 0 else -1.0
            q += s * term
        else:
            s = 1.0 if (k // 2) % 2 == 0 else -1.0
            p += s * term
    chi = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


@njit(cache=True)
def _bessel_j_s(nu, x):
    if x <= J_SERIES_XMAX:
        return _j_series_s(nu, x)
    if x >= J_HANKEL_XMIN and 2.0 * nu * nu <= x:
        return _j_hankel_s(nu, x)
    return _j_miller_s(nu, x)


@njit(cache=True)
def bessel_j_many(nu, x):
    out = np.empty_like(x)
    for i in range(x.size):
        out[i] = _bessel_j_s(nu, x[i])
    return out


@njit(cache=True)
def _clenshaw_s(coeffs, u):
    b1 = 0.0
    b2 = 0.0
    for k in range(coeffs.size - 1, 0, -1):
        b0 = 2.0 * u * b1 - b2 + coeffs[k]
        b2 = b1
        b1 = b0
    return u * b1 - b2 + 0.5 * coeffs[0]


@njit(cache=True)
def _k01_s(x):
    if x >= K_ZERO_XMIN:
        return 0.0, 0.0
    if x >= K_SERIES_XMAX:
        u = (8.0 / x - 2.0) * 0.5
        f = math.exp(-x) / math.sqrt(x)
        return f * _clenshaw_s(K0_CHEB, u), f * _clenshaw_s(K1_CHEB, u)
    t = 0.25 * x * x
    term_a = 1.0
    term_b = 1.0
    i0 = 1.0
    i1s = 1.0
    s0 = 0.0
    pk = -EULER_GAMMA
    pk1 = 1.0 - EULER_GAMMA
    s1 = pk + pk1
    h = 0.0
    for k in range(1, K_SERIES_TERMS):
        term_a *= t / (k * k)
        term_b *= t / (k * (k + 1))
        h += 1.0 / k
        pk += 1.0 / k
        pk1 += 1.0 / (k + 1)
        i0 += term_a
        i1s += term_b
        s0 += term_a * h
        s1 += term_b * (pk + pk1)
    lg = math.log(0.5 * x)
    k0 = -(lg + EULER_GAMMA) * i0 + s0
    k1 = lg * (0.5 * x) * i1s + 1.0 / x - 0.25 * x * s1
    return k0, k1


@njit(cache=True)
def k0_many(x):
    out = np.empty_like(x)
    for i in range(x.size):
        out[i] = _k01_s(x[i])[0]
    return out


@njit(cache=True)
def k1_many(x):
    out = np.empty_like(x)
    for i in range(x.size):
        out[i] = _k01_s(x[i])[1]
    return out


@njit(cache=True)
def k0k2_many(x):
    out = np.empty_like(x)
    for i in range(x.size):
        k0, k1 = _k01_s(x[i])
        out[i] = 2.0 * k0 + (2.0 * k1 / x[i] if x[i] < K_ZERO_XMIN else 0.0)
    return out


@njit(cache=True)
def ou_batch(phi, decay, sig, normals, sqw, w):
    n_t = normals.shape[0]
    n_ch = phi.shape[0]
    s1 = np.zeros(n_ch)
    s2 = np.zeros(n_ch)
    s4 = np.zeros(n_ch)
    sxp = 0.0
    sxp2 = 0.0
    sxd = 0.0
    sxd2 = 0.0
    for t in range(n_t):
        y = 0.0
        d = 0.0
        for c in range(n_ch):
            p = phi[c] * decay[c] + sig[c] * normals[t, c]
            phi[c] = p
            p2 = p * p
            s1[c] += p
            s2[c] += p2
            s4[c] += p2 * p2
            y += sqw[c] * p
            d += w[c] * p2
        xp = y * y
        sxp += xp
        sxp2 += xp * xp
        sxd += d
        sxd2 += d * d
    return s1, s2, s4, sxp, sxp2, sxd, sxd2


@njit(cache=True)
def axial_partial_sum(q, length, n_terms):
    # Neumaier-compensated; the two cutoff sums cancel to ~1e-9 of their size.
    q2 = q * q
    c = math.pi / length
    s = 0.0
    comp = 0.0
    for n in range(1, n_terms + 1):
        k2 = (n * c) * (n * c)
        term = k2 / (q2 + k2)
        t = s + term
        if abs(s) >= abs(term):
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
    return 2.0 * (s + comp) / length
