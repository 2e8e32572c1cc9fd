"""Pure-numpy implementations of the hot numeric kernels.

Array-oriented twins of the numba kernels in ``_kernels_numba``; selected
through :mod:`casimir_piston.backend`.
"""

import numpy as np

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

NAME = "numpy"


def _j_series(nu, x):
    half = 0.5 * x
    term = np.ones_like(x)
    for k in range(1, nu + 1):
        term = term * (half / k)
    s = term.copy()
    t = -half * half
    for k in range(1, J_SERIES_TERMS + 1):
        term = term * t / (k * (nu + k))
        s += term
    return s


def _j_miller(nu, x):
    # Backward recurrence with the J0 + 2*sum J_2k = 1 normalization.
    mx = float(np.max(np.maximum(nu, x)))
    m = int(mx) + J_MILLER_PAD + int(J_MILLER_CBRT * mx ** (1.0 / 3.0))
    if m % 2 == 1:
        m += 1
    inv_x = 1.0 / x
    u_next = np.zeros_like(x)
    u_curr = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    tgt = np.zeros_like(x)
    if (m - 1) == nu:
        tgt = u_curr.copy()
    if (m - 1) % 2 == 0:
        norm = norm + 2.0 * u_curr
    for k in range(m - 1, 0, -1):
        u_prev = (2.0 * k) * inv_x * u_curr - u_next
        u_next = u_curr
        u_curr = u_prev
        kk = k - 1
        if kk == nu:
            tgt = u_curr.copy()
        if kk % 2 == 0:
            norm = norm + (u_curr if kk == 0 else 2.0 * u_curr)
        big = np.abs(u_curr) > 1e250
        if big.any():
            scale = np.where(big, 1e-250, 1.0)
            u_curr = u_curr * scale
            u_next = u_next * scale
            norm = norm * scale
            tgt = tgt * scale
    return tgt / norm


def _j_hankel(nu, x):
    mu = 4.0 * nu * nu
    inv8x = 1.0 / (8.0 * x)
    term = np.ones_like(x)
    p = np.ones_like(x)
    q = np.zeros_like(x)
    for k in range(1, J_HANKEL_TERMS):
        term = term * (mu - (2 * k - 1) ** 2) * inv8x / k
        if k % 2 == 1:
            s = 1.0 if ((k - 1) // 2) % 2 == 0 else -1.0
            q = q + s * term
        else:
            s = 1.0 if (k // 2) % 2 == 0 else -1.0
            p = p + s * term
    chi = x - (0.5 * nu + 0.25) * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def bessel_j_many(nu, x):
    """J_nu at an array of points x >= 0, for one integer order nu >= 0."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty_like(x)
    ser = x <= J_SERIES_XMAX
    han = ~ser & (x >= J_HANKEL_XMIN) & (2.0 * nu * nu <= x)
    mil = ~(ser | han)
    if ser.any():
        out[ser] = _j_series(nu, x[ser])
    if han.any():
        out[han] = _j_hankel(nu, x[han])
    if mil.any():
        out[mil] = _j_miller(nu, x[mil])
    return out


def _clenshaw(coeffs, u):
    b1 = np.zeros_like(u)
    b2 = np.zeros_like(u)
    for k in range(len(coeffs) - 1, 0, -1):
        b1, b2 = 2.0 * u * b1 - b2 + coeffs[k], b1
    return u * b1 - b2 + 0.5 * coeffs[0]


def _k01_series(x):
    t = 0.25 * x * x
    term_a = np.ones_like(x)  # t^k / (k!)^2
    term_b = np.ones_like(x)  # t^k / (k! (k+1)!)
    i0 = np.ones_like(x)
    i1s = np.ones_like(x)
    s0 = np.zeros_like(x)
    pk = -EULER_GAMMA
    pk1 = 1.0 - EULER_GAMMA
    s1 = (pk + pk1) * term_b.copy()
    h = 0.0
    for k in range(1, K_SERIES_TERMS):
        term_a = term_a * t / (k * k)
        term_b = term_b * t / (k * (k + 1))
        h += 1.0 / k
        pk += 1.0 / k
        pk1 += 1.0 / (k + 1)
        i0 += term_a
        i1s += term_b
        s0 += term_a * h
        s1 += term_b * (pk + pk1)
    lg = np.log(0.5 * x)
    k0 = -(lg + EULER_GAMMA) * i0 + s0
    k1 = lg * (0.5 * x) * i1s + 1.0 / x - 0.25 * x * s1
    return k0, k1


def _k01_cheb(x):
    u = (8.0 / x - 2.0) * 0.5
    f = np.exp(-x) / np.sqrt(x)
    return f * _clenshaw(K0_CHEB, u), f * _clenshaw(K1_CHEB, u)


def _k01_many(x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    k0 = np.zeros_like(x)
    k1 = np.zeros_like(x)
    lo = x < K_SERIES_XMAX
    hi = ~lo & (x < K_ZERO_XMIN)
    if lo.any():
        k0[lo], k1[lo] = _k01_series(x[lo])
    if hi.any():
        k0[hi], k1[hi] = _k01_cheb(x[hi])
    return k0, k1


def k0_many(x):
    return _k01_many(x)[0]


def k1_many(x):
    return _k01_many(x)[1]


def k0k2_many(x):
    """K_0(x) + K_2(x) via the upward recurrence K_2 = K_0 + 2 K_1 / x."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    k0, k1 = _k01_many(x)
    out = 2.0 * k0
    nz = x < K_ZERO_XMIN
    out[nz] += 2.0 * k1[nz] / x[nz]
    return out


def ou_batch(phi, decay, sig, normals, sqw, w):
    """Advance all channels through one batch of exact OU steps.

    phi is updated in place.  Returns per-channel sums of phi, phi^2, phi^4
    over the batch plus sums and squared sums of the two quadratic-form
    samples (coherent and diagonal).
    """
    n_ch = phi.shape[0]
    s1 = np.zeros(n_ch)
    s2 = np.zeros(n_ch)
    s4 = np.zeros(n_ch)
    sxp = 0.0
    sxp2 = 0.0
    sxd = 0.0
    sxd2 = 0.0
    for t in range(normals.shape[0]):
        phi *= decay
        phi += sig * normals[t]
        p2 = phi * phi
        s1 += phi
        s2 += p2
        s4 += p2 * p2
        xp = float(sqw @ phi)
        xp *= xp
        xd = float(w @ p2)
        sxp += xp
        sxp2 += xp * xp
        sxd += xd
        sxd2 += xd * xd
    return s1, s2, s4, sxp, sxp2, sxd, sxd2


def axial_partial_sum(q, length, n_terms):
    """(2/L) * sum_{n=1..N} k^2/(q^2+k^2) with k = n*pi/L, chunked."""
    q2 = q * q
    c = np.pi / length
    acc = 0.0
    chunk = 1 << 20
    for start in range(1, n_terms + 1, chunk):
        stop = min(n_terms, start + chunk - 1)
        n = np.arange(start, stop + 1, dtype=np.float64)
        k2 = (n * c) ** 2
        acc += float(np.sum(k2 / (q2 + k2)))
    return 2.0 * acc / length
