import math
import warnings

import numpy as np
import pytest

from conftest import link
from frozen_values import FROZEN
from rffso import analytics as an
from rffso import montecarlo as mc
from rffso.channel import BINARY_SCHEMES, Mpsk, Mqam
from rffso.errors import ContourError
from rffso.specfun import MeijerGSpec, adaptive_integrate

TAGS = {1.0: "xi1", 6.7: "xi6.7", math.inf: "xiinf"}


def rel(a, b):
    return abs(a - b) / abs(b)


# CDF


@pytest.mark.parametrize("gam", ["0.5", "5", "30"])
def test_cdf_against_frozen(any_xi, gam):
    assert rel(an.cdf(link(any_xi), float(gam)), FROZEN[f"cdf_{TAGS[any_xi]}_g{gam}"]) < 1e-9


def test_cdf_limits(ref_link):
    assert an.cdf(ref_link, 1e-9) < 1e-4
    assert an.cdf(ref_link, 1e4) > 0.999
    assert an.cdf(ref_link, 0.0) == 0.0


def test_cdf_monotone(any_xi):
    v = an.cdf(link(any_xi), np.geomspace(1e-6, 1e3, 60))
    assert np.all(np.diff(v) >= 0)


def test_cdf_against_monte_carlo_1e7(ref_link):
    est = mc.empirical_cdf(ref_link, [5.0], mc.McConfig(samples=10**7))[0]
    assert est.within(an.cdf(ref_link, 5.0))


def test_cdf_clamp_warns():
    with pytest.warns(RuntimeWarning):
        out = an._clamp(np.array([1.0 + 1e-6]), 0.0, 1.0, "cdf", 1e-9)
    assert out[0] == 1.0


# PDF


def test_pdf_normalization(any_xi):
    p = link(any_xi)
    total = adaptive_integrate(lambda g: an.pdf(p, g), 0.0, math.inf)
    assert abs(total - 1.0) < 1e-6


def test_pdf_finite_difference_at_3(any_xi):
    p = link(any_xi)
    h = 3e-4
    fd = (an.cdf(p, 3 + h) - an.cdf(p, 3 - h)) / (2 * h)
    assert rel(fd, an.pdf(p, 3.0)) < 1e-4


def test_pdf_matches_product_rule_form():
    for xi in (1.0, 6.7):
        p = link(xi)
        g = np.array([0.01, 0.5, 3.0, 40.0])
        assert np.allclose(an.pdf(p, g), an.pdf_product_rule(p, g), rtol=1e-8)


def test_pdf_stable_at_small_gamma_large_xi():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        v = an.pdf(link(50.0), np.geomspace(1e-15, 1e-6, 12))
    assert np.all(v > 0)
    assert rel(an.pdf(link(50.0), 1e-14), an.pdf(link(math.inf), 1e-14)) < 1e-2


def test_pdf_limit_branch():
    assert rel(an.pdf(link(50.0), 3.0), an.pdf(link(math.inf), 3.0)) <= 1e-2


def test_pdf_rejects_nonpositive(ref_link):
    with pytest.raises(ValueError):
        an.pdf(ref_link, 0.0)


# MGF and moments


@pytest.mark.parametrize("s", ["0.1", "1", "10"])
def test_mgf_against_frozen(any_xi, s):
    assert rel(an.mgf(link(any_xi), float(s)), FROZEN[f"mgf_{TAGS[any_xi]}_s{s}"]) < 1e-9


def test_mgf_properties(ref_link):
    assert an.mgf(ref_link, 0.0) == 1.0
    v = an.mgf(ref_link, np.geomspace(1e-3, 1e3, 30))
    assert np.all(np.diff(v) <= 0) and np.all(v > 0) and np.all(v <= 1)


def test_mgf_laplace_oracle(ref_link):
    oracle = adaptive_integrate(lambda g: math.exp(-g) * an.pdf(ref_link, g), 0.0, math.inf)
    assert rel(an.mgf(ref_link, 1.0), oracle) < 1e-5


def test_mgf_limit_branch():
    assert rel(an.mgf(link(50.0), 1.0), an.mgf(link(math.inf), 1.0)) <= 1e-2


@pytest.mark.parametrize("n", [1, 2, 3])
def test_moments_against_frozen(any_xi, n):
    assert rel(an.moment(link(any_xi), n), FROZEN[f"moment_{TAGS[any_xi]}_n{n}"]) < 1e-9


@pytest.mark.parametrize("n", [1, 2])
def test_moment_ccdf_oracle(ref_link, n):
    oracle = adaptive_integrate(lambda g: n * g ** (n - 1) * an.ccdf(ref_link, g), 0.0, math.inf)
    assert rel(an.moment(ref_link, n), oracle) < 1e-6


def test_moment_bounds(ref_link):
    assert 0 < an.moment(ref_link, 1) <= ref_link.gbar1
    with pytest.raises(ValueError):
        an.moment(ref_link, 0)


# amount of fading


def test_af_definitions(any_xi):
    p = link(any_xi)
    assert an.af(p, 1) == 0.0
    compose = an.moment(p, 2) / an.moment(p, 1) ** 2 - 1
    assert rel(an.af(p, 2), compose) < 1e-9
    assert an.af(p, 2) >= 0
    m = [FROZEN[f"moment_{TAGS[any_xi]}_n{n}"] for n in (1, 3)]
    assert rel(an.af(p, 3), m[1] / m[0] ** 3 - 1) < 1e-8


# BER


@pytest.mark.parametrize("scheme", list(BINARY_SCHEMES))
def test_ber_against_frozen(any_xi, scheme):
    got = an.avg_ber_binary(link(any_xi), BINARY_SCHEMES[scheme])
    assert rel(got, FROZEN[f"ber_{scheme}_{TAGS[any_xi]}"]) < 1e-9


def test_ber_zero_snr():
    for mod in BINARY_SCHEMES.values():
        assert abs(an.avg_ber_binary(link(1.0, 1e-6), mod) - 0.5) < 1e-3


def test_ber_cbpsk_beats_nbfsk():
    p = link(6.7, 20.0)
    assert an.avg_ber_binary(p, BINARY_SCHEMES["cbpsk"]) < an.avg_ber_binary(p, BINARY_SCHEMES["nbfsk"])


def test_ber_decreasing_in_snr():
    v = [an.avg_ber_binary(link(1.0, 10 ** (d / 10)), BINARY_SCHEMES["dbpsk"]) for d in range(0, 41, 5)]
    assert np.all(np.diff(v) < 0)


def test_ber_nonincreasing_in_xi():
    v = [an.avg_ber_binary(link(xi, 20.0), BINARY_SCHEMES["cbfsk"]) for xi in (1.0, 2.0, 6.7)]
    assert np.all(np.diff(v) <= 0)


def test_ber_limit_branch():
    for mod in BINARY_SCHEMES.values():
        assert rel(an.avg_ber_binary(link(50.0), mod), an.avg_ber_binary(link(math.inf), mod)) <= 1e-2


def test_ber_type_check(ref_link):
    with pytest.raises(TypeError):
        an.avg_ber_binary(ref_link, Mpsk(4))


# SER


def test_ser_m2_reductions(ref_link):
    cbpsk = an.avg_ber_binary(ref_link, BINARY_SCHEMES["cbpsk"])
    assert rel(an.avg_ser_mpsk(ref_link, 2), cbpsk) < 1e-4
    assert rel(an.avg_ser_mam(ref_link, 2), cbpsk) < 1e-4


@pytest.mark.parametrize("func, m", [(an.avg_ser_mpsk, 8), (an.avg_ser_mam, 4), (an.avg_ser_mqam, 16)])
def test_ser_gcq_vs_adaptive(ref_link, func, m):
    assert abs(func(ref_link, m) - func(ref_link, m, method="adaptive")) < 1e-5


def test_ser_orderings(ref_link):
    assert an.avg_ser_mpsk(ref_link, 8) >= an.avg_ser_mpsk(ref_link, 4)
    am = [an.avg_ser_mam(ref_link, m) for m in (2, 4, 8)]
    assert np.all(np.diff(am) >= 0)
    assert an.avg_ser_mqam(ref_link, 16) >= an.avg_ser_mqam(ref_link, 4)
    for m in (4, 8):
        assert 0 < an.avg_ser_mpsk(ref_link, m) < (m - 1) / m


def test_qam4_equals_qpsk():
    p = link(1.0, 1000.0)
    assert rel(an.avg_ser_mqam(p, 4), an.avg_ser_mpsk(p, 4)) < 0.05


def test_ser_rejects_bad_order(ref_link):
    with pytest.raises(ValueError):
        an.avg_ser_mqam(ref_link, 8)
    with pytest.raises(ValueError):
        an.avg_ser_mpsk(ref_link, 4, method="simpson")


# capacity


@pytest.mark.parametrize("gbar", ["10", "15"])
@pytest.mark.parametrize("xi", [1.0, math.inf], ids=["xi1", "xiinf"])
def test_capacity_against_frozen(xi, gbar):
    p = link(xi, float(gbar))
    expected = FROZEN[f"capacity_{TAGS[xi]}_g{gbar}"]
    assert rel(an.ergodic_capacity(p), expected) < 1e-6
    assert rel(an.capacity_oracle(p), expected) < 1e-8


def test_capacity_oracle_degenerate():
    assert an.capacity_oracle(link(1.0, 1e-6)) < 1e-5


def test_capacity_monotone_in_snr():
    v = [an.capacity_oracle(link(1.0, g)) for g in (1.0, 10.0, 100.0)]
    assert np.all(np.diff(v) >= 0)


def test_capacity_limit_branch():
    assert rel(an.ergodic_capacity(link(50.0, 15.0)), an.ergodic_capacity(link(math.inf, 15.0))) <= 1e-2


# plumbing


def test_errors_carry_link_parameters(ref_link):
    with pytest.raises(ContourError) as info:
        an.meijer_g(MeijerGSpec((2.0,), (-1.5,), 1, 1), 1.0, None, ref_link)
    assert "LinkParams" in "".join(str(a) for a in info.value.args) + "".join(getattr(info.value, "__notes__", []))


def test_metric_request_validation(ref_link):
    with pytest.raises(ValueError):
        an.MetricRequest(ref_link, "cdf", (2.0, 1.0))
    with pytest.raises(ValueError):
        an.MetricRequest(ref_link, "ber", (1.0,), Mqam(16))
    with pytest.raises(ValueError):
        an.MetricRequest(ref_link, "ser", (1.0,))
    with pytest.raises(ValueError):
        an.MetricRequest(ref_link, "outage", (1.0,))


def test_evaluate_dispatch(ref_link):
    out = an.evaluate(an.MetricRequest(ref_link, "ber", (10.0, 20.0), BINARY_SCHEMES["dbpsk"]))
    assert out[0] == pytest.approx(FROZEN["ber_dbpsk_xi1"], rel=1e-9)
    assert out[1] < out[0]
    cdf = an.evaluate(an.MetricRequest(ref_link, "cdf", (0.5, 5.0)))
    assert cdf[1] == pytest.approx(FROZEN["cdf_xi1_g5"], rel=1e-9)


def test_cdf_interpolant_accuracy(ref_link):
    draws = np.sort(mc.sample_snr(ref_link, mc.McConfig(samples=20000)))
    f, err = an.cdf_interpolant(ref_link, draws)
    assert err < 1e-6
    pts = draws[::997]
    assert np.max(np.abs(f(pts) - an.cdf(ref_link, pts))) < 1e-6
