"""Monte-Carlo estimators for the end-to-end SNR of the relay link.

Every estimator draws the SNR in ``batches`` independent blocks. Block ``b``
uses its own Philox stream keyed by ``(seed, b)``, so results depend only on
``(seed, samples, batches)`` and not on how many worker threads ran the
blocks. Standard errors come from the spread of the block means.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special

from .channel import (
    NORMALIZATIONS,
    Binary,
    Mam,
    Mpsk,
    Mqam,
    conditional_ber,
    sample_end_to_end_snr,
)
from .specfun.quadrature import chebyshev_rule

DEFAULT_SEED = 0x5EED_F50
LN2 = math.log(2.0)

# Chebyshev nodes per draw for the conditional M-PSK error probability, and
# rows per vectorized block (keeps the draws x nodes matrix near 10 MB).
PSK_NODES = 96
_PSK_ROWS = 16384


@dataclass(frozen=True)
class McConfig:
    """Sample budget and seed of a Monte-Carlo run.

    ``workers`` only changes wall time, never the result.
    """

    samples: int = 10**6
    seed: int = DEFAULT_SEED
    batches: int = 32
    workers: int = 1

    def __post_init__(self):
        for name in ("samples", "batches", "workers", "seed"):
            value = getattr(self, name)
            if int(value) != value:
                raise ValueError(f"{name} must be an integer, got {value!r}")
        if not self.samples >= self.batches >= 2:
            raise ValueError(
                f"need samples >= batches >= 2, got samples={self.samples}, batches={self.batches}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def batch_sizes(self):
        base, extra = divmod(int(self.samples), int(self.batches))
        return [base + (b < extra) for b in range(int(self.batches))]


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    samples: int
    seed: int

    def within(self, reference, sigmas=3.0):
        """True when ``reference`` is within ``sigmas`` standard errors."""
        return abs(self.value - reference) <= sigmas * self.std_error

    def z_score(self, reference):
        if self.std_error == 0:
            return 0.0 if self.value == reference else math.inf
        return (self.value - reference) / self.std_error


def batch_rng(seed, batch):
    """Independent counter-based generator for one batch."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(int(batch),))))


def _run_batches(params, cfg, work, normalization):
    """Apply ``work(gamma, rng)`` to every batch; results come back in batch order."""
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
    sizes = cfg.batch_sizes()

    def one(b):
        rng = batch_rng(cfg.seed, b)
        gamma = sample_end_to_end_snr(params, rng, sizes[b], normalization)
        return work(gamma, rng)

    if cfg.workers == 1:
        return [one(b) for b in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(one, range(len(sizes))))


def _batch_mean_estimate(params, cfg, statistic, normalization="peak"):
    """Mean of ``statistic(gamma, rng)`` with a batch-means standard error."""
    sizes = np.array(cfg.batch_sizes(), dtype=float)
    sums = np.array(
        _run_batches(params, cfg, lambda g, rng: float(np.sum(statistic(g, rng))), normalization)
    )
    means = sums / sizes
    value = float(sums.sum() / sizes.sum())
    std_error = float(np.std(means, ddof=1) / math.sqrt(len(means)))
    return Estimate(value, std_error, int(cfg.samples), int(cfg.seed))


def sample_snr(params, cfg=McConfig(), normalization="peak"):
    """All end-to-end SNR draws of a run, concatenated in batch order."""
    return np.concatenate(_run_batches(params, cfg, lambda g, rng: g, normalization))


def empirical_cdf(params, grid, cfg=McConfig(), normalization="peak"):
    """Fraction of draws at or below each grid point, with binomial standard errors."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise ValueError("grid is empty")

    def count(g, rng):
        return np.searchsorted(np.sort(g), grid, side="right")

    counts = np.sum(_run_batches(params, cfg, count, normalization), axis=0)
    n = int(cfg.samples)
    out = []
    for c in counts:
        p = c / n
        out.append(Estimate(float(p), math.sqrt(p * (1.0 - p) / n), n, int(cfg.seed)))
    return out


def estimate_ber(params, mod, cfg=McConfig()):
    """Semi-analytic BER: average of the conditional error probability over SNR draws."""
    if not isinstance(mod, Binary):
        raise TypeError("estimate_ber needs a Binary modulation")
    return _batch_mean_estimate(params, cfg, lambda g, rng: conditional_ber(mod.p, mod.q, g))


def estimate_ber_direct(params, mod, cfg=McConfig()):
    """Bit-level BER: one error coin per draw with the conditional error probability.

    Only meaningful when the BER is large enough for the sample budget; kept
    as a cross-check on :func:`estimate_ber`.
    """
    if not isinstance(mod, Binary):
        raise TypeError("estimate_ber_direct needs a Binary modulation")

    def flips(g, rng):
        return rng.random(g.shape) < conditional_ber(mod.p, mod.q, g)

    return _batch_mean_estimate(params, cfg, flips)


def _q(x):
    return 0.5 * special.erfc(x / math.sqrt(2.0))


def conditional_ser(mod, gamma):
    """Symbol error probability of an M-ary scheme at a fixed SNR.

    M-AM and square M-QAM use their Q-function forms. M-PSK integrates
    ``exp(-g sin^2(pi/M) / sin^2 phi)`` over ``(0, (M-1) pi / M)`` on
    :data:`PSK_NODES` Chebyshev nodes.
    """
    g = np.asarray(gamma, dtype=float)
    m = mod.m_order
    if isinstance(mod, Mam):
        return 2.0 * (m - 1) / m * _q(np.sqrt(6.0 * g / (m * m - 1.0)))
    if isinstance(mod, Mqam):
        r = 1.0 - 1.0 / math.sqrt(m)
        q = _q(np.sqrt(3.0 * g / (m - 1.0)))
        return 4.0 * r * q - 4.0 * r * r * q * q
    if not isinstance(mod, Mpsk):
        raise TypeError(f"conditional_ser needs an M-ary modulation, got {mod!r}")
    x, w = chebyshev_rule(PSK_NODES)
    upper = (m - 1) * math.pi / m
    phi = 0.5 * upper * (1.0 + x)
    rate = math.sin(math.pi / m) ** 2 / np.sin(phi) ** 2
    flat = g.reshape(-1)
    out = np.empty_like(flat)
    for start in range(0, flat.size, _PSK_ROWS):
        block = flat[start : start + _PSK_ROWS]
        out[start : start + _PSK_ROWS] = np.exp(-np.outer(block, rate)) @ w
    return (0.5 * upper / math.pi * out).reshape(g.shape)


def estimate_ser(params, mod, cfg=McConfig()):
    """Semi-analytic SER of an M-ary scheme."""
    if isinstance(mod, Binary):
        raise TypeError("estimate_ser needs an M-ary modulation")
    return _batch_mean_estimate(params, cfg, lambda g, rng: conditional_ser(mod, g))


def estimate_error_rate(params, mod, cfg=McConfig()):
    if isinstance(mod, Binary):
        return estimate_ber(params, mod, cfg)
    return estimate_ser(params, mod, cfg)


def estimate_capacity(params, cfg=McConfig()):
    """Sample mean of ``log2(1 + gamma)``."""
    return _batch_mean_estimate(params, cfg, lambda g, rng: np.log1p(g) / LN2)


def estimate_moment(params, n, cfg=McConfig()):
    """Sample mean of ``gamma**n``.

    Warns for ``n >= 3``: the summands are heavy tailed there and the
    batch-means interval is wide and itself noisy.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"moment order must be a positive integer, got {n}")
    if n >= 3:
        warnings.warn(
            f"moment order {n}: heavy-tailed summands, standard error is unreliable",
            RuntimeWarning,
            stacklevel=2,
        )
    return _batch_mean_estimate(params, cfg, lambda g, rng: g ** int(n))


def estimate_af(params, n, cfg=McConfig()):
    """Amount of fading ``E[g^n] / E[g]^n - 1`` from one set of draws.

    The standard error is the spread of the per-batch ratios over
    ``sqrt(batches)`` (a jackknife-free batch-means interval).
    """
    if int(n) != n or n < 1:
        raise ValueError(f"AF order must be a positive integer, got {n}")
    n = int(n)
    parts = np.array(
        _run_batches(params, cfg, lambda g, rng: (g.size, float(np.sum(g)), float(np.sum(g**n))), "peak")
    )
    size, s1, sn = parts[:, 0], parts[:, 1], parts[:, 2]
    total = size.sum()
    value = (sn.sum() / total) / (s1.sum() / total) ** n - 1.0
    per_batch = (sn / size) / (s1 / size) ** n - 1.0
    std_error = float(np.std(per_batch, ddof=1) / math.sqrt(len(size)))
    return Estimate(float(value), std_error, int(cfg.samples), int(cfg.seed))


def ks_distance(empirical, analytic_cdf):
    """Largest gap between the empirical CDF and ``analytic_cdf`` at the draw points.

    ``empirical`` must be sorted. The empirical CDF is taken right-continuous
    (ties count in full); left limits are not probed, so the result can sit
    up to ``1/N`` below the classical two-sided KS statistic.
    """
    x = np.asarray(empirical, dtype=float)
    if x.size == 0:
        raise ValueError("ks_distance needs at least one draw")
    if np.any(np.diff(x) < 0):
        raise ValueError("ks_distance needs sorted draws")
    step = np.searchsorted(x, x, side="right") / x.size
    model = np.asarray(analytic_cdf(x), dtype=float)
    return float(np.max(np.abs(step - model)))
