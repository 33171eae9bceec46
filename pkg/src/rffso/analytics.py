"""Closed-form statistics and performance metrics of the end-to-end SNR.

Every quantity is a finite combination of Meijer G functions of the
constants in :func:`rffso.channel.derived_constants`. Functions dispatch on
``params.pointing_errors``: with an infinite ``xi`` the pointing-error
factor drops out and the ``G^{5,.}`` forms with ``kappa3`` are used.

All SNR arguments are linear.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .channel import Binary, LinkParams, Mam, Mpsk, Mqam, derived_constants
from .errors import QuadratureError, annotate
from .specfun.meijer import EgbmgfSpec, MeijerGSpec, egbmgf
from .specfun.meijer import meijer_g as _meijer_g
from .specfun.quadrature import DEFAULT_CONFIG, adaptive_integrate, gcq_integrate

LN2 = math.log(2.0)
SER_AGREEMENT = 1e-5


def meijer_g(spec, z, cfg, params):
    """Forward to the engine, tagging errors with the link parameters."""
    try:
        return _meijer_g(spec, z, cfg)
    except Exception as exc:
        annotate(exc, f"while evaluating {spec} for {params}")
        raise


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return float(arr) if scalar else arr


def _ccdf_kernel(params, k):
    """Prefactor and G-spec of the CCDF ``A exp(-g / gbar1) G(B g / gbar1)``."""
    if params.pointing_errors:
        return k.a1, MeijerGSpec((k.kappa1,), k.kappa2, 6, 0)
    return k.a2, MeijerGSpec((), k.kappa3, 5, 0)


def _laplace_kernel(params, k, first):
    """``G^{6,1}_{2,6}(. | first, kappa1; kappa2)`` or its ``G^{5,1}_{1,5}`` limit."""
    if params.pointing_errors:
        return k.a1, MeijerGSpec((first, k.kappa1), k.kappa2, 6, 1)
    return k.a2, MeijerGSpec((first,), k.kappa3, 5, 1)


def ccdf(params, gamma, cfg=DEFAULT_CONFIG):
    """Complementary CDF ``P[gamma_e2e > gamma]``; accurate where the CDF is near 1."""
    g, scalar = _as_array(gamma)
    if np.any(g < 0):
        raise ValueError("ccdf needs gamma >= 0")
    k = derived_constants(params)
    amp, spec = _ccdf_kernel(params, k)
    out = np.ones_like(g)
    pos = g > 0
    if pos.any():
        gp = g[pos]
        out[pos] = amp * np.exp(-gp / params.gbar1) * meijer_g(
            spec, k.b_const * gp / params.gbar1, cfg, params
        )
    return _out(out, scalar)


def _clamp(values, lo, hi, what, slack):
    if np.any(values < lo - slack) or np.any(values > hi + slack):
        warnings.warn(
            f"{what} left [{lo}, {hi}] by more than {slack:g}; clamping", RuntimeWarning, stacklevel=3
        )
    return np.clip(values, lo, hi)


def cdf(params, gamma, cfg=DEFAULT_CONFIG):
    """CDF of the end-to-end SNR, i.e. the outage probability at threshold ``gamma``."""
    g, scalar = _as_array(gamma)
    raw = 1.0 - np.atleast_1d(ccdf(params, g, cfg))
    return _out(_clamp(raw, 0.0, 1.0, "cdf", 1e-9).reshape(g.shape), scalar)


def pdf(params, gamma, cfg=DEFAULT_CONFIG):
    """Density of the end-to-end SNR at ``gamma > 0``.

    Written as a sum of two nonnegative G terms,
    ``(A / gbar1) exp(-g / gbar1) [G(z | kappa1; kappa2) + B G(z | xi^2/2; xi^2/2 - 1, kappa4)]``
    with ``z = B g / gbar1``. The second term is ``-z dG/dz / z`` with all
    lower parameters shifted down by one. Without pointing errors the
    ``kappa3`` / ``kappa4`` pair plays the same role. See
    :func:`pdf_product_rule` for the algebraically equal form that
    cancels badly at small ``gamma`` and large ``xi``.
    """
    g, scalar = _as_array(gamma)
    if np.any(g <= 0):
        raise ValueError("pdf needs gamma > 0")
    k = derived_constants(params)
    g1 = params.gbar1
    z = k.b_const * g / g1
    if params.pointing_errors:
        amp = k.a1
        base = MeijerGSpec((k.kappa1,), k.kappa2, 6, 0)
        shifted = MeijerGSpec((k.kappa1 - 1.0,), (k.kappa2[0] - 1.0,) + k.kappa4, 6, 0)
    else:
        amp = k.a2
        base = MeijerGSpec((), k.kappa3, 5, 0)
        shifted = MeijerGSpec((), k.kappa4, 5, 0)
    raw = amp / g1 * np.exp(-g / g1) * (
        meijer_g(base, z, cfg, params) + k.b_const * meijer_g(shifted, z, cfg, params)
    )
    raw = np.asarray(raw, dtype=float)
    return _out(_clamp(raw, 0.0, np.inf, "pdf", 1e-10), scalar)


def pdf_product_rule(params, gamma, cfg=DEFAULT_CONFIG):
    """Density from differentiating the CDF with the product rule, without rearrangement.

    ``A/(2 g gbar1) exp(-g/gbar1) (2 gbar1 G(z|-;kappa3) + (2 g - xi^2 gbar1) G(z|kappa1;kappa2))``.
    Equal to :func:`pdf` but ill-conditioned when ``xi**2 gbar1 / g`` is
    large; kept as an independent cross-check. Finite ``xi`` only.
    """
    if not params.pointing_errors:
        raise ValueError("pdf_product_rule applies to finite xi only")
    g, scalar = _as_array(gamma)
    k = derived_constants(params)
    g1 = params.gbar1
    z = k.b_const * g / g1
    g5 = meijer_g(MeijerGSpec((), k.kappa3, 5, 0), z, cfg, params)
    g6 = meijer_g(MeijerGSpec((k.kappa1,), k.kappa2, 6, 0), z, cfg, params)
    out = k.a1 / (2.0 * g * g1) * np.exp(-g / g1) * (2.0 * g1 * g5 + (2.0 * g - params.xi**2 * g1) * g6)
    return _out(np.asarray(out, dtype=float), scalar)


def mgf(params, s, cfg=DEFAULT_CONFIG):
    """Moment generating function ``E[exp(-s gamma)]`` for ``s >= 0``."""
    sv, scalar = _as_array(s)
    if np.any(sv < 0):
        raise ValueError("mgf needs s >= 0")
    k = derived_constants(params)
    amp, spec = _laplace_kernel(params, k, 0.0)
    g1 = params.gbar1
    out = np.ones_like(sv)
    pos = sv > 0
    if pos.any():
        sp = sv[pos]
        out[pos] = 1.0 - sp * amp / (sp + 1.0 / g1) * meijer_g(
            spec, k.b_const / (sp * g1 + 1.0), cfg, params
        )
    return _out(_clamp(out, 0.0, 1.0, "mgf", 1e-9), scalar)


def _laplace_moment_g(params, first, cfg):
    k = derived_constants(params)
    amp, spec = _laplace_kernel(params, k, first)
    return amp, meijer_g(spec, k.b_const, cfg, params)


def moment(params, n, cfg=DEFAULT_CONFIG):
    """Raw moment ``E[gamma**n]`` for a positive integer ``n``."""
    if int(n) != n or n < 1:
        raise ValueError(f"moment order must be a positive integer, got {n}")
    amp, g = _laplace_moment_g(params, 1.0 - n, cfg)
    return n * amp * params.gbar1**n * g


def af(params, n=2, cfg=DEFAULT_CONFIG):
    """Amount of fading of order ``n``: ``E[gamma**n] / E[gamma]**n - 1``."""
    if int(n) != n or n < 1:
        raise ValueError(f"amount-of-fading order must be a positive integer, got {n}")
    amp, g0 = _laplace_moment_g(params, 0.0, cfg)
    if n == 1:
        gn = g0
    else:
        _, gn = _laplace_moment_g(params, 1.0 - n, cfg)
    return n * amp ** (1 - n) * gn / g0**n - 1.0


def avg_ber_binary(params, mod, cfg=DEFAULT_CONFIG):
    """Average bit error rate of a binary scheme with parameters ``(p, q)``."""
    if not isinstance(mod, Binary):
        raise TypeError("avg_ber_binary needs a Binary modulation")
    p, q = mod.p, mod.q
    k = derived_constants(params)
    amp, spec = _laplace_kernel(params, k, 1.0 - p)
    g1 = params.gbar1
    g = meijer_g(spec, k.b_const / (q * g1 + 1.0), cfg, params)
    log_pref = p * math.log(q) - math.lgamma(p) - p * math.log(q + 1.0 / g1)
    return 0.5 - 0.5 * amp * math.exp(log_pref) * g


def _finite_range(f, lo, hi, cfg, method):
    """Integral of the MGF kernel over ``[lo, hi]``.

    ``gcq`` runs the Chebyshev rule at ``n`` and ``2n`` nodes and falls back
    to adaptive integration when the two disagree by more than 1e-5.
    """
    if method == "adaptive":
        return adaptive_integrate(lambda phi: float(f(np.array([phi]))[0]), lo, hi, cfg)
    if method != "gcq":
        raise ValueError(f"unknown quadrature method {method!r}")
    value, change = gcq_integrate(f, lo, hi, cfg.gcq_nodes, return_change=True)
    if change > SER_AGREEMENT:
        try:
            return adaptive_integrate(lambda phi: float(f(np.array([phi]))[0]), lo, hi, cfg)
        except QuadratureError as exc:
            annotate(exc, f"Chebyshev rule node-doubling change was {change:.3g}")
            raise
    return value


def _mgf_kernel(params, g, cfg):
    return lambda phi: mgf(params, g / np.sin(phi) ** 2, cfg)


def avg_ser_mpsk(params, m_order, cfg=DEFAULT_CONFIG, method="gcq"):
    """Average SER of M-PSK, ``(1/pi) int_0^{(M-1)pi/M} M(sin^2(pi/M) / sin^2 phi) dphi``."""
    m_order = Mpsk(m_order).m_order
    g = math.sin(math.pi / m_order) ** 2
    upper = (m_order - 1) * math.pi / m_order
    return _finite_range(_mgf_kernel(params, g, cfg), 0.0, upper, cfg, method) / math.pi


def avg_ser_mam(params, m_order, cfg=DEFAULT_CONFIG, method="gcq"):
    """Average SER of M-AM with ``g = 3 / (M**2 - 1)`` over ``phi`` in ``(0, pi/2]``."""
    m_order = Mam(m_order).m_order
    g = 3.0 / (m_order**2 - 1.0)
    integral = _finite_range(_mgf_kernel(params, g, cfg), 0.0, math.pi / 2, cfg, method)
    return 2.0 * (m_order - 1) / (m_order * math.pi) * integral


def avg_ser_mqam(params, m_order, cfg=DEFAULT_CONFIG, method="gcq"):
    """Average SER of square M-QAM: two MGF integrals over ``(0, pi/2]`` and ``(0, pi/4]``."""
    m_order = Mqam(m_order).m_order
    g = 3.0 / (2.0 * (m_order - 1.0))
    r = 1.0 - 1.0 / math.sqrt(m_order)
    kernel = _mgf_kernel(params, g, cfg)
    half = _finite_range(kernel, 0.0, math.pi / 2, cfg, method)
    quarter = _finite_range(kernel, 0.0, math.pi / 4, cfg, method)
    return 4.0 * r / math.pi * half - 4.0 * r * r / math.pi * quarter


def avg_error_rate(params, mod, cfg=DEFAULT_CONFIG, method="gcq"):
    """BER for binary schemes, SER for the M-ary ones."""
    if isinstance(mod, Binary):
        return avg_ber_binary(params, mod, cfg)
    dispatch = {Mpsk: avg_ser_mpsk, Mam: avg_ser_mam, Mqam: avg_ser_mqam}
    return dispatch[type(mod)](params, mod.m_order, cfg, method)


def capacity_egbmgf_spec(params):
    """Block structure of the bivariate G in the ergodic-capacity closed form."""
    k = derived_constants(params)
    outer = MeijerGSpec((0.0,), (), 0, 1)
    inner1 = MeijerGSpec((0.0,), (0.0,), 1, 1)
    _, inner2 = _ccdf_kernel(params, k)
    return EgbmgfSpec(outer, inner1, inner2)


def ergodic_capacity(params, cfg=DEFAULT_CONFIG):
    """Ergodic capacity ``E[log2(1 + gamma)]`` in bit/s/Hz via the bivariate Meijer G."""
    k = derived_constants(params)
    amp = k.a1 if params.pointing_errors else k.a2
    try:
        value = egbmgf(capacity_egbmgf_spec(params), params.gbar1, k.b_const, cfg)
    except Exception as exc:
        annotate(exc, f"while evaluating the ergodic capacity for {params}")
        raise
    return amp * params.gbar1 / LN2 * value


def capacity_oracle(params, cfg=DEFAULT_CONFIG):
    """Ergodic capacity as ``(1/ln 2) int_0^inf ccdf(g) / (1 + g) dg`` by adaptive quadrature."""
    f = lambda g: ccdf(params, g, cfg) / (1.0 + g)
    return adaptive_integrate(f, 0.0, math.inf, cfg) / LN2


def cdf_interpolant(params, draws, cfg=DEFAULT_CONFIG, nodes=1500):
    """Monotone interpolant of the exact CDF over the range of ``draws``.

    For KS distances against 10**6 draws: the CDF is evaluated exactly at
    ``nodes`` log-spaced points and interpolated with PCHIP in ``log gamma``.
    Returns ``(callable, max_error)`` where ``max_error`` is measured at the
    midpoints between nodes.
    """
    from scipy.interpolate import PchipInterpolator

    draws = np.asarray(draws, dtype=float)
    lo = max(float(draws[draws > 0].min()), 1e-300) * 0.5
    hi = float(draws.max()) * 2.0
    grid = np.geomspace(lo, hi, nodes)
    values = cdf(params, grid, cfg)
    interp = PchipInterpolator(np.log(grid), values)
    mid = np.sqrt(grid[:-1] * grid[1:])
    max_error = float(np.max(np.abs(interp(np.log(mid)) - cdf(params, mid, cfg))))

    def func(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = interp(np.log(np.clip(x[pos], lo, hi)))
        return np.clip(out, 0.0, 1.0)

    return func, max_error


METRICS = ("cdf", "pdf", "mgf", "moments", "af", "ber", "ser", "capacity")


@dataclass(frozen=True)
class MetricRequest:
    """One metric over one grid for one link.

    ``grid`` holds gamma values for cdf/pdf, s values for mgf, orders for
    moments/af, and gbar1 values (linear) for ber/ser/capacity.
    """

    params: LinkParams
    metric: str
    grid: tuple
    modulation: object = None

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(v) for v in self.grid))
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if not self.grid:
            raise ValueError("grid is empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if self.metric in ("ber", "ser") and self.modulation is None:
            raise ValueError(f"metric {self.metric!r} needs a modulation")
        if self.metric == "ber" and not isinstance(self.modulation, Binary):
            raise ValueError("metric 'ber' needs a binary modulation (cbfsk, cbpsk, nbfsk, dbpsk)")
        if self.metric == "ser" and isinstance(self.modulation, Binary):
            raise ValueError("metric 'ser' needs an M-ary modulation (mpsk:M, mam:M, mqam:M)")


def evaluate(request, cfg=DEFAULT_CONFIG):
    """Evaluate a :class:`MetricRequest`; returns a float array aligned with the grid."""
    p, grid = request.params, np.array(request.grid)
    metric = request.metric
    if metric == "cdf":
        return np.atleast_1d(cdf(p, grid, cfg))
    if metric == "pdf":
        return np.atleast_1d(pdf(p, grid, cfg))
    if metric == "mgf":
        return np.atleast_1d(mgf(p, grid, cfg))
    if metric == "moments":
        return np.array([moment(p, int(n), cfg) for n in grid])
    if metric == "af":
        return np.array([af(p, int(n), cfg) for n in grid])
    if metric in ("ber", "ser"):
        return np.array([avg_error_rate(p.with_(gbar1=g), request.modulation, cfg) for g in grid])
    return np.array([ergodic_capacity(p.with_(gbar1=g), cfg) for g in grid])
