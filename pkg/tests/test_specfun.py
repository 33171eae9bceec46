import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from frozen_values import FROZEN
from rffso.errors import (
    CoincidentPoleError,
    ContourError,
    DomainError,
    NonFiniteIntegrandError,
    PoleError,
    QuadratureError,
    SeriesDivergenceError,
)
from rffso.specfun import (
    EgbmgfSpec,
    MeijerGSpec,
    QuadratureConfig,
    adaptive_integrate,
    contour_interval,
    egbmgf,
    gcq_integrate,
    log_gamma_complex,
    meijer_g,
    meijer_g_series,
    upper_incomplete_gamma,
)

ALPHA, BETA = 2.1, 3.5
KAPPA2_XI1 = (0.5, ALPHA / 2, (ALPHA + 1) / 2, BETA / 2, (BETA + 1) / 2, 0.0)


def rel(a, b):
    return abs(a - b) / abs(b)


# log-gamma


def test_log_gamma_trivial_values():
    assert log_gamma_complex(1.0) == pytest.approx(0.0, abs=1e-15)
    assert log_gamma_complex(0.5).real == pytest.approx(0.5723649429247001, rel=1e-14)


def test_log_gamma_against_frozen_mpmath():
    z = log_gamma_complex(3 + 4j)
    assert z.real == pytest.approx(FROZEN["loggamma_3p4i_re"], rel=1e-13)
    assert z.imag == pytest.approx(FROZEN["loggamma_3p4i_im"], rel=1e-13)
    w = log_gamma_complex(-2.5 + 0.1j)
    assert w.real == pytest.approx(FROZEN["loggamma_m2.5p0.1i_re"], rel=1e-12, abs=1e-13)
    assert w.imag == pytest.approx(FROZEN["loggamma_m2.5p0.1i_im"], rel=1e-13)


def test_log_gamma_accuracy_box():
    rng = np.random.default_rng(7)
    z = rng.uniform(-50, 50, 400) + 1j * rng.uniform(-200, 200, 400)
    ours = log_gamma_complex(z)
    ref = special.loggamma(z)
    err = np.abs(ours - ref) / np.maximum(1.0, np.abs(ref))
    assert err.max() < 1e-13


@given(st.floats(-50, 50), st.floats(-200, 200))
@settings(max_examples=60, deadline=None)
def test_log_gamma_recurrence(x, y):
    z = complex(x, y)
    if abs(z) < 1e-3 or (abs(y) < 1e-6 and x <= 0.5):
        return
    lhs = np.exp(log_gamma_complex(z + 1) - log_gamma_complex(z))
    assert abs(lhs - z) <= 1e-11 * max(1.0, abs(z))


@pytest.mark.parametrize("z", [0.0, -1.0, -7.0, -3.0 + 1e-13])
def test_log_gamma_poles(z):
    with pytest.raises(PoleError):
        log_gamma_complex(z)


def test_log_gamma_vectorized_shape():
    out = log_gamma_complex(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert out.shape == (2, 2)
    assert out[1, 1].real == pytest.approx(math.log(6.0))


# incomplete gamma


def test_upper_incomplete_gamma_values():
    assert upper_incomplete_gamma(1.0, 0.0) == pytest.approx(1.0, rel=1e-14)
    assert upper_incomplete_gamma(1.0, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-14)
    assert upper_incomplete_gamma(0.5, 1.0) == pytest.approx(FROZEN["upper_gamma_0.5_1"], rel=1e-12)
    assert upper_incomplete_gamma(2.5, 7.0) == pytest.approx(FROZEN["upper_gamma_2.5_7"], rel=1e-12)


def test_upper_incomplete_gamma_against_adaptive_oracle():
    oracle = adaptive_integrate(lambda t: t**-0.5 * math.exp(-t), 1.0, math.inf)
    assert rel(upper_incomplete_gamma(0.5, 1.0), oracle) < 1e-9


@pytest.mark.parametrize("a", [0.0, -1.0])
def test_upper_incomplete_gamma_domain(a):
    with pytest.raises(DomainError):
        upper_incomplete_gamma(a, 1.0)


# Meijer G: specs and contour


def test_spec_validation():
    with pytest.raises(ValueError):
        MeijerGSpec((), (0.0,), 2, 0)
    with pytest.raises(ValueError):
        MeijerGSpec((1.0,), (0.0,), 1, 2)
    spec = MeijerGSpec((1.5,), KAPPA2_XI1, 6, 0)
    assert (spec.p, spec.q) == (1, 6)


def test_contour_interval_nonempty_and_rejected():
    lo, hi = contour_interval(MeijerGSpec((0.0,), (0.0,), 1, 1))
    assert (lo, hi) == (0.0, 1.0)
    with pytest.raises(ContourError):
        contour_interval(MeijerGSpec((2.0,), (-1.5,), 1, 1))


@pytest.mark.parametrize("z", [0.1, 1.0, 10.0])
def test_identity_exponential(z):
    assert rel(meijer_g(MeijerGSpec((), (0.0,), 1, 0), z), math.exp(-z)) < 1e-10
    assert rel(meijer_g(MeijerGSpec((1.0,), (), 0, 1), z), math.exp(-1.0 / z)) < 1e-10


@pytest.mark.parametrize("b", [0.5, 1.0, 2.5])
@pytest.mark.parametrize("z", [0.1, 1.0, 10.0])
def test_identity_binomial(b, z):
    got = meijer_g(MeijerGSpec((1.0 - b,), (0.0,), 1, 1), z)
    assert rel(got, math.gamma(b) * (1.0 + z) ** (-b)) < 1e-10


def test_spec_examples():
    assert meijer_g(MeijerGSpec((), (0.0,), 1, 0), 1.0) == pytest.approx(0.3678794412, rel=1e-10)
    assert meijer_g(MeijerGSpec((0.0,), (0.0,), 1, 1), 1.0) == pytest.approx(0.5, rel=1e-12)


def test_g6_against_frozen_and_oversampled_contour():
    spec = MeijerGSpec((1.5,), KAPPA2_XI1, 6, 0)
    value = meijer_g(spec, 0.37)
    assert rel(value, FROZEN["g6_kappa_xi1_z0.37"]) < 1e-10
    tight = meijer_g(spec, 0.37, QuadratureConfig(contour_truncation_tol=1e-15))
    assert rel(value, tight) < 1e-12


def test_g3_eq1_kernel_frozen():
    spec = MeijerGSpec((5.0,), (4.0, ALPHA, BETA), 3, 0)
    assert rel(meijer_g(spec, 1.3), FROZEN["g3_eq1_kernel_xi2_z1.3"]) < 1e-10


def test_meijer_vectorized_matches_scalar():
    spec = MeijerGSpec((1.5,), KAPPA2_XI1, 6, 0)
    z = np.geomspace(1e-6, 1e3, 17)
    vec = meijer_g(spec, z)
    for zi, vi in zip(z, vec):
        assert vi == pytest.approx(meijer_g(spec, float(zi)), rel=1e-13)


@pytest.mark.parametrize(
    "spec, z",
    [
        (MeijerGSpec((1.5,), KAPPA2_XI1, 6, 0), 1e-8),
        (MeijerGSpec((1.5,), KAPPA2_XI1, 6, 0), 25.0),
        (MeijerGSpec((0.0, 1.5), KAPPA2_XI1, 6, 1), 0.05),
        (MeijerGSpec((-1.0, 1.5), KAPPA2_XI1, 6, 1), 0.05),
        (MeijerGSpec((), KAPPA2_XI1[1:], 5, 0), 3.0),
    ],
)
def test_meijer_against_mpmath(spec, z):
    a_up, a_lo = list(spec.a[: spec.n]), list(spec.a[spec.n :])
    b_lo, b_up = list(spec.b[: spec.m]), list(spec.b[spec.m :])
    ref = float(mp.meijerg([a_up, a_lo], [b_lo, b_up], z))
    assert rel(meijer_g(spec, z), ref) < 1e-10


@pytest.mark.parametrize("tol", [1e-10, 1e-12])
def test_contour_robustness_to_truncation(tol):
    spec = MeijerGSpec((1.5,), KAPPA2_XI1, 6, 0)
    for z in (1e-4, 0.37, 12.0):
        a = meijer_g(spec, z, QuadratureConfig(contour_truncation_tol=tol))
        b = meijer_g(spec, z, QuadratureConfig(contour_truncation_tol=tol / 2))
        assert rel(a, b) < tol


def test_meijer_bad_argument():
    with pytest.raises(ValueError):
        meijer_g(MeijerGSpec((), (0.0,), 1, 0), -1.0)


# residue series


def test_series_examples():
    assert meijer_g_series(MeijerGSpec((), (0.0,), 1, 0), 2.0) == pytest.approx(math.exp(-2.0), rel=1e-12)
    with pytest.raises(CoincidentPoleError):
        meijer_g_series(MeijerGSpec((), (0.5, 0.5), 2, 0), 1.0)


@pytest.mark.parametrize(
    "spec, z",
    [
        (MeijerGSpec((5.0,), (4.0, ALPHA, BETA), 3, 0), 1.3),
        (MeijerGSpec((45.89,), (44.89, ALPHA, BETA), 3, 0), 4.0),
        (MeijerGSpec((1.5,), (0.5, ALPHA / 2, (ALPHA + 1) / 2, BETA / 2, (BETA + 1) / 2, 0.0), 6, 0), 0.37),
        (MeijerGSpec((), (ALPHA / 2, (ALPHA + 1) / 2, BETA / 2, (BETA + 1) / 2, 0.0), 5, 0), 0.02),
        (MeijerGSpec((0.3,), (0.0,), 1, 1), 0.4),
    ],
)
def test_series_agrees_with_contour(spec, z):
    assert rel(meijer_g_series(spec, z), meijer_g(spec, z)) < 1e-9


def test_series_divergence_region():
    with pytest.raises(SeriesDivergenceError):
        meijer_g_series(MeijerGSpec((0.3,), (0.0,), 1, 1), 2.0)


# bivariate


def test_egbmgf_degenerate_inner_exponential():
    # inner2 = G^{1,0}_{0,1}: the y contour collapses to (1 + y)^(-s) and the
    # result is G^{1,2}_{2,1}[x / (1 + y) | 0, 0; 0] / (1 + y)
    spec = EgbmgfSpec(
        MeijerGSpec((0.0,), (), 0, 1), MeijerGSpec((0.0,), (0.0,), 1, 1), MeijerGSpec((), (0.0,), 1, 0)
    )
    x, y = 2.0, 0.5
    merged = meijer_g(MeijerGSpec((0.0, 0.0), (0.0,), 1, 2), x / (1 + y)) / (1 + y)
    assert rel(egbmgf(spec, x, y), merged) < 1e-6


def test_egbmgf_refinement_self_consistency():
    spec = EgbmgfSpec(
        MeijerGSpec((0.0,), (), 0, 1), MeijerGSpec((0.0,), (0.0,), 1, 1), MeijerGSpec((1.5,), KAPPA2_XI1, 6, 0)
    )
    a = egbmgf(spec, 10.0, 0.5, rel_tol=1e-6)
    b = egbmgf(spec, 10.0, 0.5, rel_tol=1e-9)
    assert rel(a, b) < 1e-6


# quadrature


def test_gcq_examples():
    assert gcq_integrate(lambda x: np.ones_like(x), 0.0, math.pi) == pytest.approx(math.pi, rel=1e-14)
    assert abs(gcq_integrate(np.sin, 0.0, math.pi, 30) - 2.0) < 1e-10
    value, change = gcq_integrate(np.sin, 0.0, math.pi, 30, return_change=True)
    assert abs(value - 2.0) < 1e-12 and change < 1e-10


def test_gcq_nodes_stay_inside():
    seen = []
    gcq_integrate(lambda x: seen.append(x.copy()) or np.ones_like(x), 0.0, 1.0, 7)
    assert seen[0].min() > 0 and seen[0].max() < 1


def test_gcq_errors():
    with pytest.raises(NonFiniteIntegrandError), np.errstate(divide="ignore"):
        gcq_integrate(lambda x: 1.0 / (x - x), 0.0, 1.0)
    with pytest.raises(ValueError):
        gcq_integrate(np.sin, 1.0, 0.0)


def test_adaptive_examples():
    assert adaptive_integrate(lambda x: math.exp(-x), 0.0, math.inf) == pytest.approx(1.0, rel=1e-10)
    assert adaptive_integrate(lambda x: x**-0.5, 0.0, 1.0) == pytest.approx(2.0, rel=1e-9)


def test_adaptive_reports_best_estimate():
    cfg = QuadratureConfig(adaptive_rel_tol=1e-14, adaptive_abs_tol=1e-300)
    with pytest.raises(QuadratureError) as info:
        adaptive_integrate(lambda x: math.sin(1.0 / x) / x, 1e-9, 1.0, cfg)
    assert math.isfinite(info.value.estimate)
    assert info.value.error_bound > 0


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(gcq_nodes=1)
    with pytest.raises(ValueError):
        QuadratureConfig(adaptive_rel_tol=0.0)


def test_determinism_bitwise():
    spec = MeijerGSpec((1.5,), KAPPA2_XI1, 6, 0)
    assert meijer_g(spec, 0.37) == meijer_g(spec, 0.37)


@pytest.mark.parametrize("z", [30.0, 120.0, 300.0])
def test_exponentially_small_values_keep_relative_accuracy(z):
    assert rel(meijer_g(MeijerGSpec((), (0.0,), 1, 0), z), math.exp(-z)) < 1e-12
    assert rel(meijer_g(MeijerGSpec((1.0,), (), 0, 1), 1.0 / z), math.exp(-z)) < 1e-12


@pytest.mark.parametrize("z", [1e4, 1e6, 1e9])
def test_g6_far_tail_against_mpmath(z):
    spec = MeijerGSpec((1.5,), KAPPA2_XI1, 6, 0)
    ref = float(mp.meijerg([[], [1.5]], [list(KAPPA2_XI1), []], z))
    assert rel(meijer_g(spec, z), ref) < 1e-11
