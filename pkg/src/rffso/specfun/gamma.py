"""Gamma-family functions used by the contour engine and the error-rate models."""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from ..errors import DomainError, PoleError

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_{2k} / (2k (2k - 1)) for k = 1..9
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
)

# Stirling's series is used once |z| >= _STIRLING_RADIUS and Re z >= 1.
_STIRLING_RADIUS = 16.0

POLE_TOL = 1e-12


def _stirling(z):
    w = 1.0 / z
    w2 = w * w
    acc = np.zeros_like(z)
    for coef in reversed(_STIRLING):
        acc = acc * w2 + coef
    return (z - 0.5) * np.log(z) - z + _HALF_LOG_2PI + acc * w


def log_gamma_complex(z):
    """Principal branch of ``log Gamma(z)`` for complex ``z``.

    Accepts scalars or arrays. Arguments with small real part are moved
    right with the recurrence ``lnG(z) = lnG(z + N) - sum log(z + k)``; with
    principal logarithms this stays on the principal branch everywhere off
    the negative real axis, so no reflection step is needed. On the negative
    real axis the value returned is the limit from above.

    Raises
    ------
    PoleError
        If ``z`` lies within 1e-12 of a non-positive integer.
    """
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)

    re = arr.real
    nearest = np.round(re)
    pole = (np.abs(arr.imag) < POLE_TOL) & (nearest <= 0) & (np.abs(re - nearest) < POLE_TOL)
    if np.any(pole):
        bad = arr[pole][0]
        raise PoleError(f"log_gamma_complex: {bad} is a pole of the gamma function")

    reach = np.sqrt(np.maximum(0.0, _STIRLING_RADIUS**2 - arr.imag**2))
    shifts = np.ceil(np.maximum(0.0, np.maximum(1.0, reach) - re)).astype(np.int64)
    correction = np.zeros_like(arr)
    n_max = int(shifts.max()) if shifts.size else 0
    for k in range(n_max):
        active = shifts > k
        if not active.any():
            break
        correction[active] += np.log(arr[active] + k)

    out = _stirling(arr + shifts) - correction
    return out[0] if scalar else out


def log_gamma_real(x):
    """``(log|Gamma(x)|, sign Gamma(x))`` for real ``x``; poles raise PoleError."""
    x = float(x)
    if x <= 0 and abs(x - round(x)) < POLE_TOL:
        raise PoleError(f"log_gamma_real: {x} is a pole of the gamma function")
    if x > 0:
        return math.lgamma(x), 1.0
    sign = -1.0 if math.floor(x) % 2 else 1.0
    return math.lgamma(x), sign


def upper_incomplete_gamma(a, x):
    """Non-regularized upper incomplete gamma ``Gamma(a, x)``.

    Vectorized over ``x``. Backed by the regularized ``gammaincc`` of scipy
    multiplied back by ``Gamma(a)``.
    """
    if np.any(np.asarray(a) <= 0):
        raise DomainError("upper_incomplete_gamma requires a > 0")
    if np.any(np.asarray(x) < 0):
        raise DomainError("upper_incomplete_gamma requires x >= 0")
    return special.gammaincc(a, x) * special.gamma(a)


def regularized_upper_gamma(a, x):
    """``Gamma(a, x) / Gamma(a)``; avoids the overflow of ``Gamma(a)`` for large ``a``."""
    if np.any(np.asarray(a) <= 0):
        raise DomainError("regularized_upper_gamma requires a > 0")
    return special.gammaincc(a, x)
