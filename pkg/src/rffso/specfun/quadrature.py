"""Fixed-node Chebyshev quadrature and an adaptive integrator for oracles."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from ..errors import NonFiniteIntegrandError, QuadratureError


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances shared by the quadrature rules and the contour engine.

    Attributes
    ----------
    gcq_nodes : int
        Node count of the Chebyshev rule used for finite-range integrals.
    adaptive_rel_tol, adaptive_abs_tol : float
        Targets handed to the adaptive integrator.
    contour_truncation_tol : float
        Relative size below which the outermost contour panel is dropped.
    """

    gcq_nodes: int = 30
    adaptive_rel_tol: float = 1e-10
    adaptive_abs_tol: float = 1e-14
    contour_truncation_tol: float = 1e-12

    def __post_init__(self):
        if int(self.gcq_nodes) != self.gcq_nodes or self.gcq_nodes < 2:
            raise ValueError(f"gcq_nodes must be an integer >= 2, got {self.gcq_nodes}")
        for name in ("adaptive_rel_tol", "adaptive_abs_tol", "contour_truncation_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a positive finite number, got {value}")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=64)
def chebyshev_rule(n):
    """Nodes and weights on [-1, 1] at the zeros of the Chebyshev polynomial T_n.

    The weights are the interpolatory (Fejer) ones, so the rule integrates
    polynomials of degree n - 1 exactly against the unit weight and keeps the
    open-node property: no node ever lands on an endpoint.
    """
    k = np.arange(1, n + 1)
    theta = (2 * k - 1) * np.pi / (2 * n)
    j = np.arange(1, n // 2 + 1)
    weights = (2.0 / n) * (
        1.0 - 2.0 * np.sum(np.cos(2.0 * np.outer(theta, j)) / (4.0 * j**2 - 1.0), axis=1)
    )
    nodes = np.cos(theta)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _gcq_once(f, lo, hi, n):
    x, w = chebyshev_rule(n)
    half = 0.5 * (hi - lo)
    values = np.asarray(f(lo + half * (1.0 + x)), dtype=float)
    if not np.all(np.isfinite(values)):
        raise NonFiniteIntegrandError(f"integrand is not finite at a node on [{lo}, {hi}]")
    return half * float(np.dot(w, values))


def gcq_integrate(f, lo, hi, nodes=DEFAULT_CONFIG.gcq_nodes, *, return_change=False):
    """Integrate ``f`` over ``[lo, hi]`` on Chebyshev-Gauss nodes.

    ``f`` is called once with the whole node array. With
    ``return_change=True`` the rule is also run with ``2 * nodes`` and the
    pair ``(value, |value_2n - value_n|)`` is returned; the value reported is
    the refined one.
    """
    if not hi > lo:
        raise ValueError(f"gcq_integrate needs hi > lo, got [{lo}, {hi}]")
    if nodes < 2:
        raise ValueError("gcq_integrate needs at least 2 nodes")
    coarse = _gcq_once(f, lo, hi, int(nodes))
    if not return_change:
        return coarse
    fine = _gcq_once(f, lo, hi, 2 * int(nodes))
    return fine, abs(fine - coarse)


def adaptive_integrate(f, lo, hi, cfg=DEFAULT_CONFIG, *, points=None, limit=400):
    """Adaptive Gauss-Kronrod integration of a scalar integrand.

    ``hi`` may be ``math.inf``; QUADPACK then maps ``[lo, inf)`` onto
    ``(0, 1]`` through ``x = lo + (1 - t) / t``. ``points`` lists interior
    break points for finite ranges (known kinks or near-singular spots).

    Raises
    ------
    QuadratureError
        When the error estimate exceeds ten times the requested tolerance.
        The exception carries the best estimate and its error bound.
    """
    if not hi > lo:
        raise ValueError(f"adaptive_integrate needs hi > lo, got [{lo}, {hi}]")
    kwargs = dict(epsabs=cfg.adaptive_abs_tol, epsrel=cfg.adaptive_rel_tol, limit=limit)
    if points is not None and math.isfinite(hi):
        kwargs["points"] = list(points)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(f, lo, hi, **kwargs)
    if not math.isfinite(value):
        raise QuadratureError("adaptive integration produced a non-finite value", value, err)
    target = max(cfg.adaptive_abs_tol, cfg.adaptive_rel_tol * abs(value))
    if err > 10.0 * target:
        raise QuadratureError(
            f"adaptive integration on [{lo}, {hi}] reached error {err:.3g} "
            f"against target {target:.3g}",
            value,
            err,
        )
    return value
