import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subweibull import distributions as dist
from subweibull import orlicz


class TestAlphaParam:
    def test_split_constants(self):
        for alpha in (0.25, 0.5, 1.0, 1.5, 2.0):
            a = orlicz.AlphaParam(alpha)
            assert a.c_split == min(2 ** (alpha - 1), 1.0)
            assert a.C_split == max(2 ** (alpha - 1), 1.0)
            assert a.c_split <= 1.0 <= a.C_split
            assert a.c_split * a.C_split == pytest.approx(2 ** (alpha - 1), rel=1e-14)

    def test_alpha_one_degenerate(self):
        a = orlicz.AlphaParam(1.0)
        assert a.c_split == 1.0 == a.C_split

    @pytest.mark.parametrize("bad", [0.0, -0.5, 2.5, math.inf])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            orlicz.AlphaParam(bad)


class TestPsiFunctional:
    def test_all_zero_samples(self):
        assert orlicz.psi_functional([0.0, 0.0, 0.0], 1.0, 1.0) == 1.0

    def test_hand_values(self):
        assert orlicz.psi_functional([1.0, 1.0], 1.0, 1.0) == pytest.approx(math.e, rel=1e-12)
        assert orlicz.psi_functional([2.0], 2.0, 2.0) == pytest.approx(math.e, rel=1e-12)

    def test_strictly_decreasing_in_t(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal(100)
        ts = np.linspace(0.3, 5.0, 40)
        vals = [orlicz.psi_functional(x, 1.5, t) for t in ts]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_overflow_is_large_not_error(self):
        v = orlicz.psi_functional([1000.0], 0.5, 1e-6)
        assert v == math.inf or v > 2.0

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            orlicz.psi_functional([], 1.0, 1.0)
        with pytest.raises(ValueError):
            orlicz.psi_functional([np.nan], 1.0, 1.0)
        with pytest.raises(ValueError):
            orlicz.psi_functional([1.0], 1.0, 0.0)


class TestEmpiricalNorm:
    def test_all_zeros(self):
        v = orlicz.orlicz_norm_empirical(np.zeros(10), 1.0)
        assert v.value == 0.0
        assert v.method == "empirical-bisection"

    def test_rademacher_support(self):
        # solve exp(1/t^2) = 2
        v = orlicz.orlicz_norm_empirical([1.0, -1.0], 2.0)
        assert v.value == pytest.approx((1.0 / math.log(2.0)) ** 0.5, rel=1e-8)

    def test_weibull_million_draws(self):
        w = dist.sample(dist.DistributionSpec.weibull(1.0), 10**6, (20240, 0))
        v = orlicz.orlicz_norm_empirical(w, 1.0)
        assert v.value == pytest.approx(2.0, abs=0.05)

    def test_bisection_brackets_root(self):
        rng = np.random.default_rng(7)
        tol = 1e-9
        for _ in range(10):
            x = rng.standard_normal(rng.integers(1, 200))
            if np.all(x == 0):
                continue
            for alpha in (0.5, 1.0, 2.0):
                t = orlicz.orlicz_norm_empirical(x, alpha, tol=tol).value
                assert orlicz.psi_functional(x, alpha, t) <= 2.0
                assert orlicz.psi_functional(x, alpha, t * (1 - 4 * tol)) >= 2.0

    @pytest.mark.parametrize("c", [0.1, 1.0, 7.0])
    def test_homogeneity(self, c):
        rng = np.random.default_rng(11)
        x = rng.standard_normal(500)
        base = orlicz.orlicz_norm_empirical(x, 1.5).value
        scaled = orlicz.orlicz_norm_empirical(c * x, 1.5).value
        assert scaled == pytest.approx(c * base, rel=1e-6)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_quasi_triangle(self, alpha):
        rng = np.random.default_rng(13)
        for _ in range(5):
            x = rng.standard_normal(400)
            y = rng.exponential(size=400) * rng.choice([-1, 1], size=400)
            nx = orlicz.orlicz_norm_empirical(x, alpha).value
            ny = orlicz.orlicz_norm_empirical(y, alpha).value
            nxy = orlicz.orlicz_norm_empirical(x + y, alpha).value
            assert nxy <= orlicz.quasi_triangle_factor(alpha) * (nx + ny) * (1 + 1e-9)


class TestAnalyticNorms:
    def test_constant_zero(self):
        v = orlicz.orlicz_norm_analytic(dist.DistributionSpec.constant(), 1.0)
        assert v.value == 0.0

    def test_weibull_matching_shape(self):
        for alpha in (0.5, 1.0, 2.0):
            v = orlicz.orlicz_norm_analytic(dist.DistributionSpec.weibull(alpha), alpha)
            assert v.value == pytest.approx(2.0 ** (1.0 / alpha), rel=1e-14)

    def test_weibull_shape_mismatch_unavailable(self):
        assert orlicz.orlicz_norm_analytic(dist.DistributionSpec.weibull(1.0), 2.0) is None

    def test_gaussian(self):
        v = orlicz.orlicz_norm_analytic(dist.DistributionSpec.gaussian(), 2.0)
        assert v.value == pytest.approx(math.sqrt(8.0 / 3.0), rel=1e-14)
        assert orlicz.orlicz_norm_analytic(dist.DistributionSpec.gaussian(), 1.0) is None

    def test_rademacher(self):
        v = orlicz.orlicz_norm_analytic(dist.DistributionSpec.rademacher(), 2.0)
        assert v.value == pytest.approx((1.0 / math.log(2.0)) ** 0.5, rel=1e-14)

    def test_uniform_unavailable(self):
        assert orlicz.orlicz_norm_analytic(dist.DistributionSpec.uniform(-1, 1), 2.0) is None

    def test_closed_form_agreement_with_empirical(self):
        w = dist.sample(dist.DistributionSpec.weibull(2.0), 10**6, (99, 0))
        emp = orlicz.orlicz_norm_empirical(w, 2.0).value
        assert emp == pytest.approx(2.0**0.5, rel=0.05)


class TestGaussianQuadrature:
    def test_alpha_two_matches_closed_form(self):
        v = orlicz.gaussian_orlicz_norm_quadrature(2.0)
        assert v.value == pytest.approx(math.sqrt(8.0 / 3.0), rel=1e-12)

    def test_alpha_one_matches_phi_closed_form(self):
        # independent oracle: E exp(|X|/t) = 2 exp(1/(2 t^2)) Phi(1/t) = 2
        from scipy import optimize, stats

        root = optimize.brentq(
            lambda t: math.exp(1.0 / (2 * t * t)) * stats.norm.cdf(1.0 / t) - 1.0, 0.5, 10.0
        )
        v = orlicz.gaussian_orlicz_norm_quadrature(1.0)
        assert v.value == pytest.approx(root, rel=1e-8)

    def test_alpha_half_against_monte_carlo(self):
        x = dist.sample(dist.DistributionSpec.gaussian(), 10**6, (17, 0))
        emp = orlicz.orlicz_norm_empirical(x, 0.5).value
        assert orlicz.gaussian_orlicz_norm_quadrature(0.5).value == pytest.approx(emp, rel=0.02)


class TestLpNorm:
    def test_hand_values(self):
        assert orlicz.lp_norm([1.0, 1.0, 1.0], 3.0) == pytest.approx(1.0, rel=1e-14)
        assert orlicz.lp_norm([0.0, 2.0], 2.0) == pytest.approx(math.sqrt(2.0), rel=1e-14)
        assert orlicz.lp_norm([-3.0, 4.0], 1.0) == pytest.approx(3.5, rel=1e-14)

    def test_rejects(self):
        with pytest.raises(ValueError):
            orlicz.lp_norm([1.0], 0.5)
        with pytest.raises(ValueError):
            orlicz.lp_norm([np.inf], 2.0)


class TestEquivalenceConstants:
    def test_alpha_one_chain(self):
        k = orlicz.equivalence_constants(1.0, 1.0)
        assert k.K2 == pytest.approx(3.0, rel=1e-14)
        assert k.K3 == pytest.approx(6.0 * math.e, rel=1e-14)
        assert k.K4 == pytest.approx(6.0 * math.e / math.log(2.0), rel=1e-14)
        assert k.K5 == pytest.approx(2.0 * math.e * 3.0, rel=1e-14)

    def test_alpha_two(self):
        k = orlicz.equivalence_constants(2.0, 1.0)
        assert k.K2 == pytest.approx(3.0 * 2.0 ** (-1.5), rel=1e-14)

    def test_linear_in_k1(self):
        assert orlicz.equivalence_constants(1.0, 2.0).K2 == pytest.approx(6.0, rel=1e-14)

    def test_k5_below_one_raises(self):
        k = orlicz.equivalence_constants(0.5, 1.0)
        with pytest.raises(ValueError):
            _ = k.K5

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
    def test_moment_growth_on_weibull(self, alpha):
        # tail exp(-t^a) <= 2 exp(-t^a) gives the chain with K1 = 1
        w = dist.sample(dist.DistributionSpec.weibull(alpha), 2 * 10**5, (31, 0))
        k2 = orlicz.equivalence_constants(alpha, 1.0).K2
        for p in (1, 2, 4, 8, 16):
            assert orlicz.lp_norm(w, p) <= k2 * p ** (1.0 / alpha)


class TestMgfBound:
    def test_small_lambda_branch(self):
        assert orlicz.mgf_upper_bound(0.1, 2.0, 1.0) == pytest.approx(math.exp(4.0 * 0.01), rel=1e-14)

    def test_large_lambda_needs_alpha_above_one(self):
        assert orlicz.mgf_upper_bound(2.0, 1.0, 1.5) == pytest.approx(math.exp(2.0**3), rel=1e-12)
        with pytest.raises(ValueError):
            orlicz.mgf_upper_bound(2.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            orlicz.mgf_upper_bound(0.1, 1.0, 0.5)


class TestQuasiTriangleFactor:
    def test_values(self):
        assert orlicz.quasi_triangle_factor(1.0) == pytest.approx(2.0, rel=1e-14)
        assert orlicz.quasi_triangle_factor(2.0) == pytest.approx(math.sqrt(2.0), rel=1e-14)
        assert orlicz.quasi_triangle_factor(0.5) == pytest.approx(4.0, rel=1e-14)


@given(st.floats(min_value=0.3, max_value=2.0), st.integers(min_value=1, max_value=60))
@settings(max_examples=60, deadline=None)
def test_empirical_norm_positive_and_scales(alpha, n):
    rng = np.random.default_rng(n)
    x = rng.standard_normal(n)
    if np.all(x == 0):
        return
    v = orlicz.orlicz_norm_empirical(x, alpha, tol=1e-7).value
    assert v > 0
    doubled = orlicz.orlicz_norm_empirical(2.0 * x, alpha, tol=1e-7).value
    assert doubled == pytest.approx(2.0 * v, rel=1e-5)
