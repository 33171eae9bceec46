"""Meijer G and extended bivariate Meijer G functions of a positive argument.

Both are evaluated straight from their Mellin-Barnes integrals. With the
integration variable ``s`` on the vertical line ``Re s = c`` the univariate
integrand is::

    prod_{j<m} Gamma(b_j + s) * prod_{i<n} Gamma(1 - a_i - s)
    ---------------------------------------------------------  *  z**(-s)
    prod_{j>=m} Gamma(1 - b_j - s) * prod_{i>=n} Gamma(a_i + s)

and ``G(z) = (1 / 2 pi) * integral over y of integrand(c + i y) dy``. The
integrand is analytic in a strip around the line and decays exponentially
along it, so the trapezoidal rule converges geometrically in the step size;
the step is chosen from the strip half-width and ``|log z|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize, special

from ..errors import (
    CoincidentPoleError,
    ContourError,
    ImaginaryResidueError,
    NonConvergenceError,
    PoleError,
    SeriesDivergenceError,
)
from .gamma import POLE_TOL, log_gamma_complex, log_gamma_real
from .quadrature import DEFAULT_CONFIG

T_START = 32.0
T_CEILING = 4096.0
# Nodes whose integrand modulus is below this fraction of the peak are dropped.
# |z**(-s)| is the same at every node of a vertical line, so this is exact to
# far below double precision.
_PRUNE = 1e-22
_CHUNK = 4096
# Target for |log z| * (c - pole) when z < 1; the cancellation is about e**3.
_CANCELLATION_BUDGET = 3.0


@dataclass(frozen=True)
class MeijerGSpec:
    """Parameter block of ``G^{m,n}_{p,q}(z | a; b)``."""

    a: tuple
    b: tuple
    m: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if not 0 <= self.m <= len(self.b):
            raise ValueError(f"need 0 <= m <= q, got m={self.m}, q={len(self.b)}")
        if not 0 <= self.n <= len(self.a):
            raise ValueError(f"need 0 <= n <= p, got n={self.n}, p={len(self.a)}")
        if self.m == 0 and self.n == 0:
            raise ValueError("m = n = 0 has no contour integral representation")

    @property
    def p(self):
        return len(self.a)

    @property
    def q(self):
        return len(self.b)

    def __str__(self):
        return f"G^{{{self.m},{self.n}}}_{{{self.p},{self.q}}}(a={list(self.a)}; b={list(self.b)})"


def contour_interval(spec):
    """Open interval of admissible ``Re s`` separating the two pole families.

    One-sided intervals (``n = 0`` or ``m = 0``) are closed off one unit away
    from the finite end.
    """
    lo = max((-b for b in spec.b[: spec.m]), default=-math.inf)
    hi = min((1.0 - a for a in spec.a[: spec.n]), default=math.inf)
    if math.isinf(hi):
        hi = lo + 1.0
    if math.isinf(lo):
        lo = hi - 1.0
    if not lo < hi:
        raise ContourError(
            f"{spec}: empty contour interval ({lo}, {hi}); the pole families overlap"
        )
    return lo, hi


def _log_kernel(spec, s):
    """Logarithm of the gamma ratio at complex points ``s``; ``-inf`` at zeros."""
    out = np.zeros_like(s)
    for b in spec.b[: spec.m]:
        out += log_gamma_complex(b + s)
    for a in spec.a[: spec.n]:
        out += log_gamma_complex(1.0 - a - s)
    for b in spec.b[spec.m :]:
        out -= _log_gamma_allow_poles(1.0 - b - s)
    for a in spec.a[spec.n :]:
        out -= _log_gamma_allow_poles(a + s)
    return out


def _log_gamma_allow_poles(z):
    """log-gamma with ``+inf`` at poles; used where the gamma sits in a denominator."""
    z = np.asarray(z, dtype=complex)
    nearest = np.round(z.real)
    pole = (np.abs(z.imag) < POLE_TOL) & (nearest <= 0) & (np.abs(z.real - nearest) < POLE_TOL)
    if not pole.any():
        return log_gamma_complex(z)
    out = np.full(z.shape, np.inf + 0j)
    out[~pole] = log_gamma_complex(z[~pole])
    return out


def _step(half_width, log_span, digits=39.0):
    """Trapezoid step for a strip of half-width ``half_width``.

    The discretization error is about ``exp(-2 pi a / h + a |log z|)`` for
    the inner strip ``a = half_width / 2``. Steps are snapped to a quarter-
    octave ladder so nearby arguments share cached node sets.
    """
    a = 0.5 * half_width
    h = 2.0 * math.pi * a / (digits + a * log_span)
    return 2.0 ** (math.floor(4.0 * math.log2(h)) / 4.0)


@lru_cache(maxsize=512)
def _nodes(spec, c, h, t_max):
    """Pruned trapezoid nodes ``y`` on ``|y| <= t_max`` and the kernel there.

    The kernel is returned divided by ``exp(peak)``, its largest modulus on
    the line, so lines far into the right half-plane do not overflow.
    """
    k = int(math.ceil(t_max / h))
    y = h * np.arange(-k, k + 1)
    logk = _log_kernel(spec, c + 1j * y)
    peak = float(np.max(logk.real))
    keep = logk.real > peak + math.log(_PRUNE)
    y = y[keep]
    kernel = np.exp(logk[keep] - peak)
    y.setflags(write=False)
    kernel.setflags(write=False)
    return y, kernel, peak


def _line_sums(y, kernel, logz):
    """``sum_k kernel_k * exp(-i y_k log z)`` for every entry of ``logz``."""
    out = np.empty(logz.shape, dtype=complex)
    for start in range(0, logz.size, _CHUNK):
        sl = slice(start, start + _CHUNK)
        phase = np.exp(-1j * np.multiply.outer(logz[sl], y))
        out[sl] = phase @ kernel
    return out


def _line_offsets(lo, hi, logz):
    """Distance of the line from the left pole family, one per argument.

    For ``z >= 1`` the line is the midpoint of the interval. For ``z < 1``
    the integral is dominated by the rightmost left pole while the integrand
    is scaled by ``z**(-c)``, so the line moves to within ``3 / |log z|`` of
    that pole to bound the cancellation. Offsets are snapped to a half-octave
    ladder below the half-width so arrays share few node sets.
    """
    half = 0.5 * (hi - lo)
    eps = np.full(logz.shape, half)
    small = logz < 0
    eps[small] = np.minimum(half, _CANCELLATION_BUDGET / np.abs(logz[small]))
    steps = np.ceil(2.0 * np.log2(half / eps) - 1e-9)
    return half * 2.0 ** (-0.5 * steps)


def _saddle_side(spec, logz):
    """+1 or -1 when the line may slide right (left) to the real saddle, else 0.

    Sliding is used where the contour can move freely on one side and the
    kernel is log-convex and positive along the real axis: no upper poles and
    no ``1/Gamma(1 - b - s)`` factors for ``z > 1`` (the ``G^{m,0}_{p,m}``
    shape), and the mirror case for ``z < 1``.
    """
    if logz > 0 and spec.n == 0 and spec.m == spec.q:
        return 1
    if logz < 0 and spec.m == 0 and spec.n == spec.p:
        return -1
    return 0


def _saddle_line(spec, lo, hi, logz):
    """Real saddle ``c`` of ``|Phi(c)| z^-c`` and the Gaussian width there.

    On the real axis the log-kernel has the form
    ``sum lgamma(B + u) - sum lgamma(A + u) - u L`` with ``u = side * c``, so
    the saddle is a root of ``sum psi(B + u) - sum psi(A + u) - L``. Returns
    ``None`` when the saddle saves less than two decimal digits over the
    midpoint line.
    """
    side = _saddle_side(spec, logz)
    if side == 0:
        return None
    if side > 0:
        big, small, slope = np.array(spec.b), np.array(spec.a), logz
    else:
        big, small, slope = 1.0 - np.array(spec.a), 1.0 - np.array(spec.b), -logz
    u_mid = side * 0.5 * (lo + hi)

    def dphi(u):
        return float(np.sum(special.digamma(big + u)) - np.sum(special.digamma(small + u)) - slope)

    def phi(u):
        return float(np.sum(special.gammaln(big + u)) - np.sum(special.gammaln(small + u)) - u * slope)

    if np.any(small + u_mid <= 0) or dphi(u_mid) >= 0:
        return None
    span = 1.0
    while dphi(u_mid + span) < 0:
        span *= 2.0
        if span > 1e8:
            return None
    u = optimize.brentq(dphi, u_mid, u_mid + span, xtol=1e-10, rtol=1e-12)
    if phi(u_mid) - phi(u) < math.log(100.0):
        return None
    curv = float(np.sum(special.polygamma(1, big + u)) - np.sum(special.polygamma(1, small + u)))
    if not curv > 0:
        return None
    # snap so that nearby arguments share node sets
    u = u_mid + 2.0 ** (round(8.0 * math.log2(u - u_mid)) / 8.0)
    return side * u, 1.0 / math.sqrt(curv)


def meijer_g(spec, z, cfg=DEFAULT_CONFIG):
    """Evaluate ``G^{m,n}_{p,q}(z | a; b)`` for real ``z > 0`` by contour integration.

    ``z`` may be a scalar or an array; arrays share node sets. The line
    ``Re s = c`` sits at the midpoint of :func:`contour_interval` for
    ``z >= 1`` and closer to the left pole family for small ``z`` (see
    :func:`_line_offsets`). Where the result is exponentially small and the
    contour is free on one side, the line slides to the real saddle of the
    integrand instead (:func:`_saddle_line`), which keeps the relative error
    at the 1e-12 level. The half-range ``T`` of the truncated line starts
    at 32 and doubles until the outermost panel ``T/2 < |y| <= T`` carries
    less than ``cfg.contour_truncation_tol`` of the result.

    Raises
    ------
    ContourError
        The parameter lists leave no admissible line.
    NonConvergenceError
        ``T`` passed 4096 without meeting the truncation tolerance.
    ImaginaryResidueError
        The integral came back measurably complex.
    """
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    if not np.all(z_arr > 0) or not np.all(np.isfinite(z_arr)):
        raise ValueError(f"meijer_g needs finite z > 0, got {z}")

    lo, hi = contour_interval(spec)
    logz = np.log(z_arr)
    values = np.empty_like(z_arr)
    plain = np.ones(z_arr.shape, dtype=bool)
    if spec.n == 0 or spec.m == 0:
        for i, lz in enumerate(logz):
            saddle = _saddle_line(spec, lo, hi, float(lz))
            if saddle is not None:
                c, width = saddle
                h = min(_step(c - lo if spec.m else hi - c, 0.0), 2.0 ** math.floor(math.log2(width / 2.0)))
                values[i] = _meijer_line(spec, c, None, logz[i : i + 1], cfg, h=h)[0]
                plain[i] = False
    if plain.any():
        offsets = _line_offsets(lo, hi, logz[plain])
        sub = np.empty(offsets.shape)
        for eps in np.unique(offsets):
            group = offsets == eps
            sub[group] = _meijer_line(spec, lo + eps, eps, logz[plain][group], cfg)
        values[plain] = sub
    return float(values[0]) if scalar else values


def _meijer_line(spec, c, half_width, logz, cfg, h=None):
    if h is None:
        h = _step(half_width, float(np.max(np.abs(logz))))

    t_max = T_START
    while True:
        y, kernel, peak = _nodes(spec, c, h, t_max)
        scale = np.exp(peak - c * logz) * h / (2.0 * math.pi)
        total = scale * _line_sums(y, kernel, logz)
        outer = np.abs(y) > 0.5 * t_max
        tail_mass = scale * np.sum(np.abs(kernel[outer]))
        body_mass = scale * np.sum(np.abs(kernel))
        floor = np.maximum(np.abs(total.real), 1e-300 * body_mass)
        if np.all(tail_mass <= cfg.contour_truncation_tol * floor):
            break
        t_max *= 2.0
        if t_max > T_CEILING:
            raise NonConvergenceError(
                f"{spec}: contour truncation did not converge by |Im s| = {T_CEILING:g}"
            )

    residue = np.abs(total.imag)
    allowed = 1e-9 * np.maximum(np.abs(total.real), 1e-7 * body_mass)
    if np.any(residue > allowed):
        raise ImaginaryResidueError(
            f"{spec}: imaginary part {residue.max():.3g} is not negligible"
        )
    return total.real


def _check_simple_poles(spec):
    lower = spec.b[: spec.m]
    for j in range(len(lower)):
        for k in range(j + 1, len(lower)):
            diff = lower[j] - lower[k]
            if abs(diff - round(diff)) < 1e-6:
                raise CoincidentPoleError(
                    f"{spec}: b[{j}] - b[{k}] = {diff} is (nearly) an integer"
                )


def meijer_g_series(spec, z, *, max_terms=4000, max_cancellation=1e6):
    """Evaluate ``G^{m,n}_{p,q}(z)`` as a sum of residues at the poles of ``Gamma(b_j + s)``.

    Each lower parameter ``b_h`` (``h < m``) contributes
    ``C_h z**b_h * pFq-1(1 + b_h - a; 1 + b_h - b_(j!=h); (-1)**(p-m-n) z)``.
    Needs simple poles, and ``p < q`` (or ``p == q`` with ``z < 1``).

    Raises
    ------
    CoincidentPoleError
        Two of the first ``m`` lower parameters differ by an integer.
    SeriesDivergenceError
        Outside the convergence region, too many terms, or cancellation
        across the chains exceeding ``max_cancellation``.
    """
    z = float(z)
    if not z > 0:
        raise ValueError(f"meijer_g_series needs z > 0, got {z}")
    _check_simple_poles(spec)
    p, q, m, n = spec.p, spec.q, spec.m, spec.n
    if p > q or (p == q and z >= 1.0):
        raise SeriesDivergenceError(f"{spec}: residue series does not converge at z={z}")
    contour_interval(spec)

    x = z * (-1.0) ** ((p - m - n) % 2)
    logz = math.log(z)
    total = 0.0
    mass = 0.0
    for hh in range(m):
        bh = spec.b[hh]
        log_c, sign = 0.0, 1.0
        vanishes = False
        try:
            for j in range(m):
                if j != hh:
                    lg, sg = log_gamma_real(spec.b[j] - bh)
                    log_c += lg
                    sign *= sg
            for i in range(n):
                lg, sg = log_gamma_real(1.0 + bh - spec.a[i])
                log_c += lg
                sign *= sg
        except PoleError as exc:
            raise ContourError(f"{spec}: upper and lower poles coincide") from exc
        for j in range(m, q):
            arg = 1.0 + bh - spec.b[j]
            if arg <= 0 and abs(arg - round(arg)) < POLE_TOL:
                vanishes = True
                break
            lg, sg = log_gamma_real(arg)
            log_c -= lg
            sign *= sg
        for i in range(n, p):
            arg = spec.a[i] - bh
            if arg <= 0 and abs(arg - round(arg)) < POLE_TOL:
                vanishes = True
                break
            lg, sg = log_gamma_real(arg)
            log_c -= lg
            sign *= sg
        if vanishes:
            continue

        upper = [1.0 + bh - a for a in spec.a]
        lower = [1.0 + bh - b for j, b in enumerate(spec.b) if j != hh]
        term, acc, peak = 1.0, 1.0, 1.0
        for k in range(max_terms):
            ratio = x / (k + 1.0)
            for u in upper:
                ratio *= u + k
            for v in lower:
                ratio /= v + k
            term *= ratio
            acc += term
            peak = max(peak, abs(term))
            if abs(term) <= 1e-17 * abs(acc) and abs(ratio) < 1.0:
                break
            if term == 0.0:
                break
        else:
            raise SeriesDivergenceError(f"{spec}: series for b={bh} needs more than {max_terms} terms")
        weight = sign * math.exp(log_c + bh * logz)
        total += weight * acc
        mass += abs(weight) * peak

    if mass > 0 and (total == 0.0 or mass / abs(total) > max_cancellation):
        raise SeriesDivergenceError(
            f"{spec}: cancellation factor {mass / max(abs(total), 1e-300):.3g} at z={z}"
        )
    return total


@dataclass(frozen=True)
class EgbmgfSpec:
    """Three parameter blocks of the extended generalized bivariate Meijer G function.

    ``outer`` acts on ``s + t``, ``inner1`` on ``s`` (paired with ``x``) and
    ``inner2`` on ``t`` (paired with ``y``).
    """

    outer: MeijerGSpec
    inner1: MeijerGSpec
    inner2: MeijerGSpec


def _raw_interval(spec):
    lo = max((-b for b in spec.b[: spec.m]), default=-math.inf)
    hi = min((1.0 - a for a in spec.a[: spec.n]), default=math.inf)
    return lo, hi


def egbmgf_contours(spec):
    """Real parts ``(c1, c2)`` of the two lines and the distance ``delta`` to the nearest pole.

    Maximizes the common distance from the poles of the ``s``, ``t`` and
    ``s + t`` gamma factors.
    """
    lo1, hi1 = contour_interval(spec.inner1)
    lo2, hi2 = contour_interval(spec.inner2)
    lo_o, hi_o = _raw_interval(spec.outer)
    delta = min(
        0.5 * (hi1 - lo1),
        0.5 * (hi2 - lo2),
        (hi_o - lo1 - lo2) / 3.0,
        (hi1 + hi2 - lo_o) / 3.0,
    )
    if not delta > 0:
        raise ContourError(f"no pair of lines separates the poles of {spec}")
    s_lo = max(lo1 + lo2 + 2 * delta, lo_o + delta)
    s_hi = min(hi1 + hi2 - 2 * delta, hi_o - delta)
    total = 0.5 * (s_lo + s_hi)
    c1_lo = max(lo1 + delta, total - hi2 + delta)
    c1_hi = min(hi1 - delta, total - lo2 - delta)
    c1 = 0.5 * (c1_lo + c1_hi)
    return c1, total - c1, delta


def _egbmgf_once(spec, c1, c2, h1, h2, t_max, logx, logy):
    ys, k1, p1 = _nodes(spec.inner1, c1, h1, t_max)
    yt, k2, p2 = _nodes(spec.inner2, c2, h2, t_max)
    phase1 = k1 * np.exp(-1j * ys * logx)
    phase2 = k2 * np.exp(-1j * yt * logy)
    w = (c1 + c2) + 1j * np.add.outer(ys, yt)
    outer = np.exp(_log_kernel(spec.outer, w.ravel())).reshape(w.shape)
    grid = outer * np.multiply.outer(phase1, phase2)
    rim = (np.abs(ys)[:, None] > 0.5 * t_max) | (np.abs(yt)[None, :] > 0.5 * t_max)
    scale = math.exp(p1 + p2 - c1 * logx - c2 * logy) * h1 * h2 / (4.0 * math.pi**2)
    value = scale * grid.sum()
    tail = scale * np.abs(grid[rim]).sum()
    mass = scale * np.abs(grid).sum()
    return value, tail, mass


def egbmgf(spec, x, y, cfg=DEFAULT_CONFIG, *, rel_tol=1e-6, max_refinements=4):
    """Extended generalized bivariate Meijer G function at real ``x, y > 0``.

    Evaluated as a tensor-product trapezoidal rule over two truncated
    vertical lines. The truncation grows as in :func:`meijer_g`; the steps are
    then halved until two successive results agree to ``rel_tol``.

    Raises
    ------
    NonConvergenceError
        Truncation or step refinement hit its ceiling.
    ImaginaryResidueError
        The double integral came back measurably complex.
    """
    if not (x > 0 and y > 0):
        raise ValueError(f"egbmgf needs x, y > 0, got {x}, {y}")
    c1, c2, delta = egbmgf_contours(spec)
    logx, logy = math.log(x), math.log(y)
    h1 = _step(delta, abs(logx), digits=25.0)
    h2 = _step(delta, abs(logy), digits=25.0)

    t_max = T_START
    while True:
        value, tail, mass = _egbmgf_once(spec, c1, c2, h1, h2, t_max, logx, logy)
        if tail <= cfg.contour_truncation_tol * max(abs(value.real), 1e-300 * mass):
            break
        t_max *= 2.0
        if t_max > T_CEILING:
            raise NonConvergenceError(f"{spec}: truncation did not converge by {T_CEILING:g}")

    for _ in range(max_refinements):
        h1, h2 = 0.5 * h1, 0.5 * h2
        refined, _, mass = _egbmgf_once(spec, c1, c2, h1, h2, t_max, logx, logy)
        if abs(refined - value) <= rel_tol * abs(refined):
            value = refined
            break
        value = refined
    else:
        raise NonConvergenceError(f"{spec}: step refinement did not reach {rel_tol:g}")

    if abs(value.imag) > 1e-9 * max(abs(value.real), 1e-7 * mass):
        raise ImaginaryResidueError(f"{spec}: imaginary part {value.imag:.3g} is not negligible")
    return float(value.real)
