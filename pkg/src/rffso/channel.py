"""Physical model of the mixed RF/FSO fixed-gain relay link.

The source-relay hop is Rayleigh faded, so its SNR is exponential. The
relay-destination hop is an IM/DD optical link with Gamma-Gamma turbulence
and zero-boresight pointing errors. The end-to-end SNR of the fixed-gain
relay is ``g1 * g2 / (g2 + C)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import special

from .specfun.meijer import MeijerGSpec, meijer_g

# How gbar2 is tied to the optical gain. "peak": gamma2 = gbar2 * (I / A0)**2,
# which is the convention the closed-form CDF is built on. "mean": the gain is
# first rescaled to unit mean. Only "peak" reproduces the closed forms; "mean"
# is kept so the reconciliation test can show the mismatch.
NORMALIZATIONS = ("peak", "mean")


@dataclass(frozen=True)
class LinkParams:
    """The six physical parameters of a link instance.

    ``xi = math.inf`` selects the no-pointing-error model. SNRs are linear.
    """

    alpha: float
    beta: float
    xi: float
    relay_gain_c: float
    gbar1: float
    gbar2: float

    def __post_init__(self):
        for name in ("alpha", "beta", "relay_gain_c", "gbar1", "gbar2"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value}")
        if not self.xi > 0:
            raise ValueError(f"xi must be positive (or inf), got {self.xi}")

    @property
    def pointing_errors(self):
        return math.isfinite(self.xi)

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class DerivedConstants:
    a1: float | None
    a2: float
    b_const: float
    kappa1: float | None
    kappa2: tuple | None
    kappa3: tuple
    kappa4: tuple


def derived_constants(params):
    """Prefactors and Meijer-G parameter lists that appear in the closed forms.

    ``a1``, ``kappa1`` and ``kappa2`` are ``None`` when ``xi`` is infinite.
    """
    al, be, xi = params.alpha, params.beta, params.xi
    log_gab = math.lgamma(al) + math.lgamma(be)
    a2 = math.exp((al + be) * math.log(2.0) - math.log(4.0 * math.pi) - log_gab)
    b_const = (al * be) ** 2 * params.relay_gain_c / (16.0 * params.gbar2)
    kappa3 = (al / 2, (al + 1) / 2, be / 2, (be + 1) / 2, 0.0)
    kappa4 = (al / 2 - 1, (al - 1) / 2, be / 2 - 1, (be - 1) / 2, 0.0)
    if params.pointing_errors:
        a1 = xi**2 * a2 / 2.0
        kappa1 = xi**2 / 2 + 1
        kappa2 = (xi**2 / 2,) + kappa3
    else:
        a1 = kappa1 = kappa2 = None
    return DerivedConstants(a1, a2, b_const, kappa1, kappa2, kappa3, kappa4)


class Modulation:
    """Base class for the modulation variants."""


@dataclass(frozen=True)
class Binary(Modulation):
    """Binary scheme with conditional BER ``Gamma(p, q g) / (2 Gamma(p))``."""

    p: float
    q: float
    name: str | None = None

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0):
            raise ValueError(f"binary modulation needs p, q > 0, got ({self.p}, {self.q})")


@dataclass(frozen=True)
class Mary(Modulation):
    m_order: int

    kind = "m-ary"

    def __post_init__(self):
        if int(self.m_order) != self.m_order or self.m_order < 2:
            raise ValueError(f"{self.kind} order must be an integer >= 2, got {self.m_order}")
        object.__setattr__(self, "m_order", int(self.m_order))


@dataclass(frozen=True)
class Mpsk(Mary):
    kind = "M-PSK"


@dataclass(frozen=True)
class Mam(Mary):
    kind = "M-AM"


@dataclass(frozen=True)
class Mqam(Mary):
    kind = "M-QAM"

    def __post_init__(self):
        super().__post_init__()
        root = math.isqrt(self.m_order)
        if self.m_order < 4 or root * root != self.m_order:
            raise ValueError(f"M-QAM order must be a perfect square >= 4, got {self.m_order}")


BINARY_SCHEMES = {
    "cbfsk": Binary(0.5, 0.5, "CBFSK"),
    "cbpsk": Binary(0.5, 1.0, "CBPSK"),
    "nbfsk": Binary(1.0, 0.5, "NBFSK"),
    "dbpsk": Binary(1.0, 1.0, "DBPSK"),
}


def parse_modulation(text):
    """Parse ``cbfsk|cbpsk|nbfsk|dbpsk|mpsk:M|mam:M|mqam:M``."""
    key = text.strip().lower()
    if key in BINARY_SCHEMES:
        return BINARY_SCHEMES[key]
    kind, sep, order = key.partition(":")
    classes = {"mpsk": Mpsk, "mam": Mam, "mqam": Mqam}
    if not sep or kind not in classes:
        raise ValueError(
            f"unknown modulation {text!r}; use cbfsk, cbpsk, nbfsk, dbpsk, mpsk:M, mam:M or mqam:M"
        )
    try:
        m_order = int(order)
    except ValueError:
        raise ValueError(f"modulation order in {text!r} is not an integer") from None
    return classes[kind](m_order)


def modulation_label(mod):
    if isinstance(mod, Binary):
        return mod.name or f"binary(p={mod.p:g},q={mod.q:g})"
    return f"{mod.m_order}-{mod.kind[2:]}"


def sample_rf_snr(gbar1, rng, size=None):
    """Exponential SNR draws of the Rayleigh hop with mean ``gbar1``."""
    if not gbar1 > 0:
        raise ValueError("gbar1 must be positive")
    return gbar1 * rng.standard_exponential(size)


def sample_turbulence(alpha, beta, rng, size=None):
    """Unit-mean Gamma-Gamma irradiance: product of two unit-mean gamma variates."""
    x = rng.standard_gamma(alpha, size) / alpha
    y = rng.standard_gamma(beta, size) / beta
    return x * y


def sample_pointing_fraction(xi, rng, size=None):
    """Pointing-loss fraction ``I_p / A0``; its CDF is ``u ** (xi**2)`` on (0, 1).

    Radial jitter is Rayleigh, so ``2 r**2 / w_eq**2`` is exponential with
    mean ``1 / xi**2`` and ``I_p / A0 = exp(-E / xi**2)``.
    """
    return np.exp(-rng.standard_exponential(size) / xi**2)


def sample_fso_snr(params, rng, size=None, normalization="peak"):
    """SNR draws of the optical hop, ``gamma2 = gbar2 * h**2`` under IM/DD."""
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
    gain = sample_turbulence(params.alpha, params.beta, rng, size)
    if params.pointing_errors:
        xi2 = params.xi**2
        gain = gain * sample_pointing_fraction(params.xi, rng, size)
        if normalization == "mean":
            gain = gain * (xi2 + 1.0) / xi2
    return params.gbar2 * gain**2


def end_to_end_snr(gamma1, gamma2, c):
    """Fixed-gain relay combiner ``g1 g2 / (g2 + C)``; ``inf`` for ``g2`` gives ``g1``."""
    if not c > 0:
        raise ValueError("relay constant C must be positive")
    g1 = np.asarray(gamma1, dtype=float)
    g2 = np.asarray(gamma2, dtype=float)
    with np.errstate(invalid="ignore"):
        ratio = np.where(np.isinf(g2), 1.0, g2 / (g2 + c))
    out = g1 * ratio
    return float(out) if out.ndim == 0 else out


def sample_end_to_end_snr(params, rng, size=None, normalization="peak"):
    g1 = sample_rf_snr(params.gbar1, rng, size)
    g2 = sample_fso_snr(params, rng, size, normalization)
    return g1 * g2 / (g2 + params.relay_gain_c)


def conditional_ber(p, q, gamma):
    """Conditional bit error probability ``Gamma(p, q gamma) / (2 Gamma(p))``."""
    if not (p > 0 and q > 0):
        raise ValueError("conditional_ber needs p, q > 0")
    out = 0.5 * special.gammaincc(p, q * np.asarray(gamma, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def fso_snr_pdf(params, gamma2):
    """Density of the optical-hop SNR under the ``peak`` normalization.

    With pointing errors this is the ``G^{3,0}_{1,3}`` form in the amplitude
    ``alpha beta sqrt(gamma2 / gbar2)``; without, the Gamma-Gamma law
    ``G^{2,0}_{0,2}`` in the same amplitude.
    """
    g = np.asarray(gamma2, dtype=float)
    al, be = params.alpha, params.beta
    amp = al * be * np.sqrt(g / params.gbar2)
    log_gab = math.lgamma(al) + math.lgamma(be)
    if params.pointing_errors:
        xi2 = params.xi**2
        spec = MeijerGSpec((xi2 + 1.0,), (xi2, al, be), 3, 0)
        out = xi2 / (2.0 * g) * math.exp(-log_gab) * meijer_g(spec, amp)
    else:
        spec = MeijerGSpec((), (al, be), 2, 0)
        out = 1.0 / (2.0 * g) * math.exp(-log_gab) * meijer_g(spec, amp)
    return float(out) if np.ndim(out) == 0 else out
