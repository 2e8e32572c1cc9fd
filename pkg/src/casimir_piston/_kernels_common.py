"""Numeric constants shared by the numba and numpy kernel backends.

The Chebyshev tables approximate e^x sqrt(x) K_a(x) as a function of
u = (8/x - 2)/2 on [2, inf); they were generated offline from a 50-digit
reference and are accurate to ~1e-17 in the fit.
"""

import numpy as np

EULER_GAMMA = 0.5772156649015328606

# Bessel J branch selection.
J_SERIES_XMAX = 10.0       # alternating series keeps <= ~6e-13 cancellation here
J_SERIES_TERMS = 32        # fixed term count; tail < 1e-25 at x = 10
J_HANKEL_XMIN = 25.0       # large-argument expansion; also requires 2*nu^2 <= x
J_HANKEL_TERMS = 40
# Miller backward recurrence starts at max(nu, x) + this buffer; the cube-root
# term covers the slow Airy-transition decay of J_k(x) near k ~ x.
J_MILLER_PAD = 30
J_MILLER_CBRT = 16.0

K_SERIES_XMAX = 2.0
K_SERIES_TERMS = 24        # terms decay like (x^2/4)^k / k!^2; < 1e-30 at x = 2
K_ZERO_XMIN = 800.0        # K_a underflows well before this

K0_CHEB = np.array([
    2.4403030820659554547e0, -3.1448101311964500543e-2, 1.5698838857300533749e-3,
    -1.2849549581627802638e-4, 1.3949813718876499364e-5, -1.8317555227191194848e-6,
    2.7668136394450150761e-7, -4.6604898976879476656e-8, 8.5740340174142260858e-9,
    -1.6975345093890615156e-9, 3.5773972814003284472e-10, -7.9574892444773970377e-11,
    1.8559491149549265550e-11, -4.5145978833745191751e-12, 1.1403405882073442347e-12,
    -2.9800969231481783548e-13, 8.0328907750683743694e-14, -2.2275133267462963604e-14,
    6.3400764762766459661e-15, -1.8485933779209071694e-15, 5.5120559994043333649e-16,
    -1.6782311257549006383e-16, 5.2103917776435541125e-17, -1.6475805939842632815e-17,
    5.3004337711773357710e-18, -1.7331712005821000278e-18, 5.7551092028827293794e-19,
    -1.9390956053183554660e-19,
])

K1_CHEB = np.array([
    2.7206261904844426694e0, 1.0392373657681723844e-1, -2.8578168596227793868e-3,
    1.9521551847135163111e-4, -1.9361979741660829600e-5, 2.4064849478372171171e-6,
    -3.5019606030878125421e-7, 5.7410841254500492923e-8, -1.0345762465678097027e-8,
    2.0150497551970346161e-9, -4.1903547593419255842e-10, 9.2183151876053141258e-11,
    -2.1299678384277910216e-11, 5.1396396734823435404e-12, -1.2891739609498229352e-12,
    3.3484196660522431201e-13, -8.9767051820101460692e-14, 2.4771544242195986813e-14,
    -7.0198370892147688513e-15, 2.0387031662398608799e-15, -6.0570472706430178228e-16,
    1.8380935752430454256e-16, -5.6894628491936483743e-17, 1.7940510478863572914e-17,
    -5.7567444820733024503e-18, 1.8778651901623267401e-18, -6.2216452873526091852e-19,
    2.0919125269831136552e-19,
])
