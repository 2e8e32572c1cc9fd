"""Stochastic-quantization cross-check of the analytic mode sums.

Each transverse-mode/Matsubara coefficient relaxes in pseudo-time as an
independent Ornstein-Uhlenbeck process with rate kappa = lam^2 + omega_m^2
and noise strength 2 k_B T.  The one-step update is the exact OU law, so
chain statistics carry no step-size bias; discrepancies from the analytic
results are purely statistical.

Randomness: a master seed is split into independent per-chain streams with
numpy's SeedSequence spawning on top of the counter-based Philox generator;
uniforms are mapped to normals by the inverse CDF (scipy's ndtri on the
numpy backend, a Halley-refined erfc inversion on the numba backend).  Runs
are bit-reproducible for a fixed seed, config and backend.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import backend
from .spectrum import Spectrum  # noqa: F401  (channel builders take a Spectrum)

_BATCH_AUTOCORR_MULTIPLE = 20.0   # batch length >= 20 autocorrelation times
_MIN_BATCHES = 4
_BURN_CHUNK = 4096
_UNIFORM_BITS = 53


@dataclass(frozen=True)
class ModeChannel:
    """One field coefficient: relaxation rate, noise strength 2 k_B T, and
    the current amplitude."""

    kappa: float
    noise_strength: float
    phi: float = 0.0

    def __post_init__(self):
        if self.kappa <= 0.0:
            raise ValueError("kappa must be positive")
        if self.noise_strength <= 0.0:
            raise ValueError("noise strength must be positive")


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    ds: float = 0.5
    n_steps: int = 20000
    burn_in: int = 512
    n_chains: int = 2

    def __post_init__(self):
        if self.ds <= 0.0:
            raise ValueError("ds must be positive")
        if not 0 <= self.burn_in < self.n_steps:
            raise ValueError("need 0 <= burn_in < n_steps")
        if self.n_chains < 1:
            raise ValueError("n_chains must be >= 1")


@dataclass
class ChainStats:
    """Per-channel moments of phi with batch-means standard errors."""

    mean: np.ndarray
    second_moment: np.ndarray
    fourth_moment: np.ndarray
    mean_err: np.ndarray
    second_err: np.ndarray
    fourth_err: np.ndarray
    n_samples: int
    n_batches: int

    def __post_init__(self):
        # Jensen on the empirical measure: <phi^4> >= <phi^2>^2 exactly
        if np.any(self.fourth_moment < self.second_moment**2 * (1.0 - 1e-12)):
            raise ValueError("fourth moments below squared second moments")


def ou_step_exact(ch, ds, gaussian_deviate):
    """Advance one channel by pseudo-time ds with the exact OU transition:

        phi' = phi e^{-kappa ds} + xi sqrt((k_B T/kappa)(1 - e^{-2 kappa ds}))
    """
    if ds < 0.0:
        raise ValueError("ds must be >= 0")
    k_b_t = 0.5 * ch.noise_strength
    decay = math.exp(-ch.kappa * ds)
    sig = math.sqrt(k_b_t / ch.kappa * (1.0 - decay * decay))
    return replace(ch, phi=ch.phi * decay + gaussian_deviate * sig)


def stationary_variance(kappa, k_b_t):
    """Equal-pseudo-time variance of a relaxed mode coefficient: k_B T / kappa."""
    if kappa <= 0.0:
        raise ValueError("kappa must be positive")
    return k_b_t / kappa


@dataclass
class ChannelSet:
    """Flat list of OU channels built from a spectrum and Matsubara range.

    Degenerate transverse modes are expanded into independent copies;
    channel (copy, m) has kappa = lam^2 + (m Lambda)^2 for m in [-M, M].
    """

    kappa: np.ndarray
    mode_index: np.ndarray   # merged-mode index of each channel
    k_b_t: float
    m_max: int

    @property
    def n_channels(self):
        return self.kappa.size


def matsubara_channels(spec, th, m_max=0):
    if math.isinf(th.beta):
        raise ValueError("sampler needs finite temperature (noise strength 2 k_B T)")
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    ms = np.arange(-m_max, m_max + 1, dtype=np.float64) * th.Lambda
    kappas = []
    mode_idx = []
    for i, (lam, g) in enumerate(zip(spec.lambdas, spec.degeneracies)):
        for _ in range(int(g)):
            kappas.append(lam * lam + ms * ms)
            mode_idx.append(np.full(ms.size, i, dtype=np.int64))
    return ChannelSet(np.concatenate(kappas), np.concatenate(mode_idx),
                      1.0 / th.beta, m_max)


def _flat_weights(channels, weights):
    w = np.asarray(weights, dtype=np.float64)
    n_m = 2 * channels.m_max + 1
    n_modes = int(channels.mode_index.max()) + 1
    if w.ndim == 0:
        return np.full(channels.n_channels, float(w))
    if w.ndim == 1:
        if w.size != n_modes:
            raise ValueError(f"per-mode weights must have length {n_modes}")
        return w[channels.mode_index]
    if w.shape == (n_modes, n_m):
        m_slot = np.tile(np.arange(n_m), channels.n_channels // n_m)
        return w[channels.mode_index, m_slot]
    raise ValueError("weights must be scalar, per-mode, or (n_modes, 2*m_max+1)")


@dataclass
class SamplerRun:
    """Aggregated output of a chain ensemble."""

    stats: ChainStats
    coherent_mean: float          # <(sum sqrt(w) phi)^2>
    coherent_mean_err: float
    coherent_var: float
    coherent_var_err: float
    diagonal_mean: float          # <sum w phi^2>
    diagonal_mean_err: float
    diagonal_var: float
    diagonal_var_err: float
    batch_steps: int


def _batch_layout(cfg):
    batch_steps = max(1, int(math.ceil(_BATCH_AUTOCORR_MULTIPLE / cfg.ds)))
    n_post = cfg.n_steps - cfg.burn_in
    n_batches = n_post // batch_steps
    if n_batches < _MIN_BATCHES:
        raise ValueError(
            f"config gives {n_batches} batches of {batch_steps} steps; need >= "
            f"{_MIN_BATCHES} (raise n_steps or ds)")
    return batch_steps, n_batches


def _uniforms(rng, shape):
    return (rng.integers(0, 1 << _UNIFORM_BITS, size=shape).astype(np.float64)
            + 0.5) * 2.0**-_UNIFORM_BITS


def run_chains(channels, weights, cfg, trace_writer=None):
    """Run the chain ensemble and aggregate batch-means statistics.

    trace_writer, if given, receives "step channel phi" lines for every
    post-burn-in step of chain 0 (volume scales as steps x channels).
    """
    kappa = channels.kappa
    n_ch = kappa.size
    w = _flat_weights(channels, weights)
    sqw = np.sqrt(np.maximum(w, 0.0))
    ds_phys = cfg.ds / float(kappa.min())
    decay = np.exp(-kappa * ds_phys)
    sig = np.sqrt(channels.k_b_t / kappa * (1.0 - decay * decay))
    batch_steps, n_batches = _batch_layout(cfg)

    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.n_chains)
    total_b = cfg.n_chains * n_batches
    bm1 = np.empty((total_b, n_ch))
    bm2 = np.empty((total_b, n_ch))
    bm4 = np.empty((total_b, n_ch))
    bxp = np.empty(total_b)
    bxp2 = np.empty(total_b)
    bxd = np.empty(total_b)
    bxd2 = np.empty(total_b)

    row = 0
    for ci in range(cfg.n_chains):
        rng = np.random.Generator(np.random.Philox(seeds[ci]))
        phi = np.zeros(n_ch)
        done = 0
        while done < cfg.burn_in:
            n = min(_BURN_CHUNK, cfg.burn_in - done)
            normals = backend.normal_from_uniform(_uniforms(rng, (n, n_ch)))
            backend.ou_batch(phi, decay, sig, normals, sqw, w)
            done += n
        for _ in range(n_batches):
            normals = backend.normal_from_uniform(_uniforms(rng, (batch_steps, n_ch)))
            if trace_writer is not None and ci == 0:
                sums = _traced_batch(phi, decay, sig, normals, sqw, w,
                                     trace_writer, row * batch_steps)
            else:
                sums = backend.ou_batch(phi, decay, sig, normals, sqw, w)
            s1, s2, s4, sxp, sxp2, sxd, sxd2 = sums
            bm1[row] = s1 / batch_steps
            bm2[row] = s2 / batch_steps
            bm4[row] = s4 / batch_steps
            bxp[row] = sxp / batch_steps
            bxp2[row] = sxp2 / batch_steps
            bxd[row] = sxd / batch_steps
            bxd2[row] = sxd2 / batch_steps
            row += 1

    def agg(b):
        return b.mean(axis=0), b.std(axis=0, ddof=1) / math.sqrt(total_b)

    m1, e1 = agg(bm1)
    m2, e2 = agg(bm2)
    m4, e4 = agg(bm4)
    stats = ChainStats(m1, m2, m4, e1, e2, e4,
                       n_samples=total_b * batch_steps, n_batches=total_b)
    xp_m, xp_e = _scalar_agg(bxp)
    xd_m, xd_e = _scalar_agg(bxd)
    xp_v, xp_ve = _var_from_batches(bxp, bxp2)
    xd_v, xd_ve = _var_from_batches(bxd, bxd2)
    return SamplerRun(stats, xp_m, xp_e, xp_v, xp_ve, xd_m, xd_e, xd_v, xd_ve,
                      batch_steps)


def _traced_batch(phi, decay, sig, normals, sqw, w, writer, step0):
    # Single-step kernel calls keep the accumulation order (and hence the
    # statistics) identical to the untraced path.
    n_ch = phi.size
    s1 = np.zeros(n_ch)
    s2 = np.zeros(n_ch)
    s4 = np.zeros(n_ch)
    sxp = 0.0
    sxp2 = 0.0
    sxd = 0.0
    sxd2 = 0.0
    for t in range(normals.shape[0]):
        a1, a2, a4, xp, xp2, xd, xd2 = backend.ou_batch(
            phi, decay, sig, normals[t:t + 1], sqw, w)
        s1 += a1
        s2 += a2
        s4 += a4
        sxp += xp
        sxp2 += xp2
        sxd += xd
        sxd2 += xd2
        for c in range(n_ch):
            writer.write(f"{step0 + t} {c} {float(phi[c])!r}\n")
    return s1, s2, s4, sxp, sxp2, sxd, sxd2


def _scalar_agg(b):
    return float(b.mean()), float(b.std(ddof=1) / math.sqrt(b.size))


def _var_from_batches(bx, bx2):
    """Var(X) = E[X^2] - E[X]^2 from batch means, delta-method stderr."""
    mx = bx.mean()
    mx2 = bx2.mean()
    var = mx2 - mx * mx
    n = bx.size
    cov = np.cov(np.vstack([bx, bx2]), ddof=1)
    grad = np.array([-2.0 * mx, 1.0])
    err = math.sqrt(max(0.0, float(grad @ cov @ grad)) / n)
    return float(var), err


def estimate_mode_sum(spec, th, weights, cfg, m_max=0):
    """Monte-Carlo estimate of sum_{p,m} g_p w_{p,m} <phi_{p,m}^2>.

    Returns (estimate, stderr); in calibration the estimate matches the
    analytic truncated Matsubara sum within ~3 stderr.
    """
    channels = matsubara_channels(spec, th, m_max)
    run = run_chains(channels, weights, cfg)
    return run.diagonal_mean, run.diagonal_mean_err


def estimate_force_fluctuation(spec, th, weights, cfg, m_max=0, structure="piston"):
    """Monte-Carlo estimate of the variance of the quadratic force functional.

    structure="piston": the coherent rank-one form X = (sum sqrt(w) phi)^2,
    whose variance converges to 2 (sum w <phi^2>)^2 — the sampler image of
    sigma_F^2 = 2 F_C^2.  structure="independent": the diagonal sum
    X = sum w phi^2 with Var = 2 sum w^2 <phi^2>^2.
    Returns (variance_estimate, stderr).
    """
    if structure not in ("piston", "independent"):
        raise ValueError("structure must be 'piston' or 'independent'")
    channels = matsubara_channels(spec, th, m_max)
    if structure == "piston" and np.any(np.asarray(weights) < 0.0):
        raise ValueError("piston structure needs nonnegative weights")
    run = run_chains(channels, weights, cfg)
    if structure == "piston":
        return run.coherent_var, run.coherent_var_err
    return run.diagonal_var, run.diagonal_var_err


def moment_ratio_checks(run):
    """Per-channel z-scores of <phi^4>/<phi^2>^2 against the Gaussian value 3.

    Uses the delta method over the batch scatter; returns (ratios, zscores).
    """
    s = run.stats
    ratio = s.fourth_moment / s.second_moment**2
    grad2 = -2.0 * s.fourth_moment / s.second_moment**3
    grad4 = 1.0 / s.second_moment**2
    var = (grad2 * s.second_err)**2 + (grad4 * s.fourth_err)**2
    z = (ratio - 3.0) / np.sqrt(var)
    return ratio, z
