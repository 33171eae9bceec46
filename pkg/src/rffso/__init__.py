"""Performance analysis of a fixed-gain relay link with a Rayleigh RF hop and a
Gamma-Gamma FSO hop with pointing errors.

Closed forms live in :mod:`rffso.analytics`, Monte-Carlo estimators in
:mod:`rffso.montecarlo`, the channel model in :mod:`rffso.channel` and the
special-function engine in :mod:`rffso.specfun`.
"""

from .channel import BINARY_SCHEMES, Binary, LinkParams, Mam, Mpsk, Mqam, derived_constants, parse_modulation
from .montecarlo import Estimate, McConfig
from .specfun import MeijerGSpec, QuadratureConfig

__version__ = "0.1.0"

__all__ = [
    "BINARY_SCHEMES",
    "Binary",
    "Estimate",
    "LinkParams",
    "Mam",
    "McConfig",
    "MeijerGSpec",
    "Mpsk",
    "Mqam",
    "QuadratureConfig",
    "derived_constants",
    "parse_modulation",
]
