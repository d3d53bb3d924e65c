import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy import integrate

from degderange.exactcore import factorial
from degderange.probability import (
    DegGammaParams,
    QuadratureError,
    QuadratureSpec,
    deg_gamma11_cdf,
    deg_gamma11_ppf,
    deg_gamma_fn,
    deg_gamma_fn_exact,
    deg_gamma_fn_quadrature,
    deg_gamma_pdf,
    erlang_bridge_check,
    erlang_moment,
    erlang_moment_quadrature,
    improper_quadrature,
    moment_ratio_expectation,
    sample_deg_gamma11,
    sampler_ks_check,
    stirling_log_expansion_check,
    theorem11_check,
)
from degderange.sequences import derange_deg


# ---------------------------------------------------------------------------
# quadrature engine


def test_quadrature_exponential():
    assert abs(improper_quadrature(lambda x: math.exp(-x)) - 1.0) < 1e-10


def test_quadrature_truncation_strategy():
    spec = QuadratureSpec(tail_cutoff_strategy="truncation")
    assert abs(improper_quadrature(lambda x: math.exp(-x), spec) - 1.0) < 1e-9


def test_quadrature_density_mass():
    lam = 0.25

    def f(x):
        return (1 - lam) * (1 + lam * x) ** (-1 / lam)

    assert abs(improper_quadrature(f) - 1.0) < 1e-8


def test_quadrature_shifted_exponent_mass():
    # antiderivative of (1+lam x)^(-1/lam - 1) is -(1+lam x)^(-1/lam),
    # so the mass is exactly 1 for any lam in (0,1)
    for lam in (0.25, 0.4):
        mass = improper_quadrature(lambda x: (1 + lam * x) ** (-1 / lam - 1))
        assert abs(mass - 1.0) < 1e-8


def test_quadrature_first_moment():
    lam = 0.25

    def f(x):
        return x * (1 - lam) * (1 + lam * x) ** (-1 / lam)

    assert abs(improper_quadrature(f) - 2.0) < 1e-8  # 1/(1-2*lam) at lam=1/4


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0)
    with pytest.raises(ValueError):
        QuadratureSpec(tail_cutoff_strategy="magic")


def test_quadrature_failure_carries_partial():
    # an oscillatory non-decaying integrand cannot converge
    with pytest.raises(QuadratureError) as info:
        improper_quadrature(lambda x: math.sin(x) if x < 1e6 else 0.0,
                            QuadratureSpec(max_subdivisions=10))
    assert hasattr(info.value, "partial_estimate")


# ---------------------------------------------------------------------------
# degenerate gamma function


def test_gamma_fn_exact_values():
    assert deg_gamma_fn_exact(1, F(1, 4)) == F(4, 3)
    # direct product oracle: 1 * (1 - 1/4) * (1 - 2/4) = 3/8
    assert deg_gamma_fn_exact(2, F(1, 4)) == 1 / (F(1) * F(3, 4) * F(1, 2)) == F(8, 3)
    assert deg_gamma_fn(1, F(1, 4)) == pytest.approx(4 / 3)


def test_gamma_fn_unit_value_closed_form():
    for lam in (F(1, 10), F(1, 4), F(2, 5), F(99, 100)):
        assert deg_gamma_fn_exact(1, lam) == 1 / (1 - lam)


def test_gamma_fn_domain():
    with pytest.raises(ValueError):
        deg_gamma_fn_exact(2, F(3, 4))  # lam >= 1/k
    with pytest.raises(ValueError):
        deg_gamma_fn_exact(1, F(0))
    with pytest.raises(ValueError):
        deg_gamma_fn_exact(0, F(1, 4))


@pytest.mark.parametrize(
    "k,lam", [(1, F(1, 4)), (2, F(1, 4)), (3, F(1, 5)), (2, F(2, 5))]
)
def test_gamma_fn_quadrature_matches_closed_form(k, lam):
    numeric = deg_gamma_fn_quadrature(k, float(lam))
    exact = float(deg_gamma_fn_exact(k, lam))
    assert abs(numeric - exact) / exact < 1e-8


def test_gamma_fn_quadrature_domain():
    with pytest.raises(ValueError):
        deg_gamma_fn_quadrature(3, 0.5)  # s >= 1/lam


# ---------------------------------------------------------------------------
# density


def test_pdf_at_zero_unit_parameters():
    p = DegGammaParams(1.0, 1.0, 0.25)
    assert deg_gamma_pdf(p, 0.0) == pytest.approx(0.75)


def test_pdf_zero_on_negative_axis():
    p = DegGammaParams(2.0, 1.0, 0.2)
    assert deg_gamma_pdf(p, -1.0) == 0.0


@pytest.mark.parametrize("alpha,beta,lam", [(1, 1, 0.25), (2, 1, 0.2), (1, 2, 1 / 3)])
def test_pdf_normalization(alpha, beta, lam):
    p = DegGammaParams(alpha, beta, lam)
    mass = improper_quadrature(lambda x: deg_gamma_pdf(p, x))
    assert abs(mass - 1.0) < 1e-8


def test_params_validation():
    with pytest.raises(ValueError):
        DegGammaParams(5.0, 1.0, 0.25)  # alpha >= 1/lam
    with pytest.raises(ValueError):
        DegGammaParams(1.0, -1.0, 0.25)
    with pytest.raises(ValueError):
        DegGammaParams(1.0, 1.0, 1.5)


# ---------------------------------------------------------------------------
# the moment identity


def test_theorem11_small_cases():
    res = theorem11_check(0, F(1, 4))
    assert res.exact_target == F(3, 4)
    assert res.passed
    res = theorem11_check(3, F(1, 4))
    assert res.exact_target == F(3, 4) * 6 == F(9, 2)
    assert res.rel_error < 1e-8


def test_theorem11_domain():
    with pytest.raises(ValueError):
        theorem11_check(2, F(1, 2))
    with pytest.raises(ValueError):
        theorem11_check(-1, F(1, 4))


def test_theorem11_exact_consistency():
    # the exact side must collapse to (1-lam) * n!; checked inside the op,
    # and the raw convolution is verified here for a spread of lam
    from degderange.exactcore import binomial
    from degderange.sequences import falling_deg

    for lam in (F(1, 10), F(1, 4), F(2, 5), F(0), F(-1, 3), F(1, 2)):
        for n in range(21):
            acc = F(0)
            for l in range(n + 1):
                acc += binomial(n, l) * derange_deg(l, lam, 0) * falling_deg(1, n - l, lam)
            assert acc == factorial(n)


# ---------------------------------------------------------------------------
# truncated log-power expansion


def test_expansion_trivial_n_zero():
    res = stirling_log_expansion_check(0, 10, F(1, 4))
    assert res.passed and res.detail == "converged at m=0"


def test_expansion_converges_for_small_lam():
    for n in (1, 2):
        res = stirling_log_expansion_check(n, 40, F(1, 64))
        assert res.passed, res.detail
        assert not res.inconclusive


def test_expansion_inconclusive_at_large_lam():
    # asymptotic wall: must be flagged, never faked into a pass
    res = stirling_log_expansion_check(1, 30, F(1, 10))
    assert not res.passed
    assert res.inconclusive
    assert res.rel_error > 1e-6


def test_expansion_argument_validation():
    with pytest.raises(ValueError):
        stirling_log_expansion_check(5, 3, F(1, 10))  # m_cap < n
    with pytest.raises(ValueError):
        moment_ratio_expectation(12, 0.1)  # diverges for m >= 1/lam


# ---------------------------------------------------------------------------
# sampling


def test_ppf_at_zero():
    assert deg_gamma11_ppf(0.25, 0.0) == 0.0


def test_ppf_validated_against_quadrature_cdf():
    # quadrature-based CDF values vs the inverse formula, before trusting it
    lam = 0.25
    p = DegGammaParams(1.0, 1.0, lam)
    for u in (0.1, 0.5, 0.9):
        x = deg_gamma11_ppf(lam, u)
        mass, err = integrate.quad(lambda t: deg_gamma_pdf(p, t), 0.0, x)
        assert abs(mass - u) < 1e-9


def test_cdf_closed_form_against_quadrature():
    lam = 1 / 3
    p = DegGammaParams(1.0, 1.0, lam)
    for x in (0.5, 1.0, 4.0):
        mass, err = integrate.quad(lambda t: deg_gamma_pdf(p, t), 0.0, x)
        assert abs(mass - deg_gamma11_cdf(lam, x)) < 1e-9
    assert deg_gamma11_cdf(lam, 1.0) == pytest.approx(1 - (1 + lam) ** ((lam - 1) / lam))


def test_sampler_mean():
    # E[X] = 1/(1-2 lam) = 2 at lam = 1/4, first validated by quadrature
    lam = 0.25
    mean_quad = improper_quadrature(
        lambda x: x * (1 - lam) * (1 + lam * x) ** (-1 / lam)
    )
    assert abs(mean_quad - 2.0) < 1e-8
    n = 200_000
    samples = sample_deg_gamma11(lam, 42, n)
    se = math.sqrt(12.0 / n)  # Var = E[X^2] - 4 = 16 - 4
    assert abs(samples.mean() - 2.0) < 3 * se


def test_sampler_reproducible():
    a = sample_deg_gamma11(0.25, 7, 100)
    b = sample_deg_gamma11(0.25, 7, 100)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_deg_gamma11(0.25, 8, 100))


@pytest.mark.parametrize("lam", [0.25, 0.5 - 0.01])
def test_sampler_ks(lam):
    stat, crit, ok = sampler_ks_check(lam, 100_000, 42)
    assert ok, (stat, crit)


def test_sampler_validation():
    with pytest.raises(ValueError):
        sample_deg_gamma11(1.5, 0, 10)
    with pytest.raises(ValueError):
        sample_deg_gamma11(0.25, 0, -1)


def test_empirical_cdf_at_one():
    lam = 0.25
    n = 100_000
    samples = sample_deg_gamma11(lam, 42, n)
    target = deg_gamma11_cdf(lam, 1.0)
    assert abs((samples <= 1.0).mean() - target) < 3 / math.sqrt(n)


# ---------------------------------------------------------------------------
# Erlang bridge


def test_erlang_moment_quadrature_validation():
    # mandatory oracle before the closed form is trusted
    for r in range(1, 5):
        for l in range(5):
            numeric = erlang_moment_quadrature(l, r)
            assert abs(numeric - erlang_moment(l, r)) / erlang_moment(l, r) < 1e-9


def test_erlang_moment_values():
    assert erlang_moment(0, 3) == 1
    assert erlang_moment(2, 1) == 2
    assert erlang_moment(3, 2) == factorial(4) // factorial(1) == 24


def test_erlang_bridge_reduces_to_exponential_bridge():
    for lam in (F(1, 3), F(-1, 4)):
        for n in range(8):
            lhs, rhs, ok = erlang_bridge_check(n, 1, lam, F(3, 4))
            assert ok
            assert lhs == derange_deg(n, lam, F(3, 4))


def test_erlang_bridge_trivial_and_deep():
    lhs, rhs, ok = erlang_bridge_check(0, 4, F(1, 3), F(0))
    assert ok and lhs == 1
    lhs, rhs, ok = erlang_bridge_check(6, 3, F(1, 3), F(0))
    assert ok


def test_erlang_bridge_validation():
    with pytest.raises(ValueError):
        erlang_bridge_check(3, 0, F(1, 3), F(0))
    with pytest.raises(ValueError):
        erlang_moment(-1, 2)
