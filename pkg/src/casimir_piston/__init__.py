"""Casimir forces and fluctuations for conducting cylindrical pistons.

Spectral engine: forces at finite temperature, zero temperature and in the
classical limit from 2D Laplacian eigenvalues, with closed-form asymptotes,
the universal fluctuation law sigma_F^2 = 2 F_C^2, and a pseudo-time
Langevin sampler that cross-checks the analytic mode sums.
"""

__version__ = "0.1.0"

from . import backend
from .force_engine import (
    ForceResult,
    ThermalState,
    ToleranceUnreachable,
    asymptote_far_classical,
    asymptote_far_t0,
    asymptote_near_classical,
    asymptote_near_t0,
    axial_kernel_check,
    axial_kernel_limit,
    fluctuation_variance,
    asymptote_far_T0,
    asymptote_near_T0,
    force_classical,
    force_finite_T,
    force_finite_t,
    force_zero_T,
    force_zero_t,
    matsubara_closed_form,
    matsubara_mode_sum,
)
from .langevin_sampler import (
    ChainStats,
    ModeChannel,
    SamplerConfig,
    estimate_force_fluctuation,
    estimate_mode_sum,
    matsubara_channels,
    ou_step_exact,
    run_chains,
    stationary_variance,
)
from .special_functions import (
    ZeroList,
    bessel_j,
    bessel_j_prime,
    bessel_j_prime_zeros,
    bessel_j_zeros,
    bessel_k,
)
from .spectrum import (
    BoundaryCondition,
    Circle,
    CrossSection,
    RasterMask,
    Rectangle,
    Spectrum,
    SpectrumError,
    TransverseMode,
    circle_spectrum,
    combined_spectrum,
    export_json_doc,
    export_table,
    raster_spectrum,
    rectangle_spectrum,
    smallest_mode,
    weyl_deviation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
