"""Special-function engine: log-gamma, incomplete gamma, Meijer G, quadrature."""

from .gamma import log_gamma_complex, log_gamma_real, regularized_upper_gamma, upper_incomplete_gamma
from .meijer import (
    EgbmgfSpec,
    MeijerGSpec,
    contour_interval,
    egbmgf,
    egbmgf_contours,
    meijer_g,
    meijer_g_series,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, adaptive_integrate, chebyshev_rule, gcq_integrate

__all__ = [
    "DEFAULT_CONFIG",
    "EgbmgfSpec",
    "MeijerGSpec",
    "QuadratureConfig",
    "adaptive_integrate",
    "chebyshev_rule",
    "contour_interval",
    "egbmgf",
    "egbmgf_contours",
    "gcq_integrate",
    "log_gamma_complex",
    "log_gamma_real",
    "meijer_g",
    "meijer_g_series",
    "regularized_upper_gamma",
    "upper_incomplete_gamma",
]
