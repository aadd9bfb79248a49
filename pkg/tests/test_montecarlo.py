import math

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from subweibull import distributions as dist
from subweibull import montecarlo as mc
from subweibull.distributions import DistributionSpec, TensorSpec


class TestEvaluateStatistic:
    def test_quadratic_form_zero_matrix(self):
        stat = mc.StatisticSpec.quadratic_form(np.zeros((2, 2)), np.ones(2))
        assert mc.evaluate_statistic(stat, np.array([3.0, -4.0])) == 0.0

    def test_largest_singular_value_of_identity_draw(self):
        stat = mc.StatisticSpec.largest_singular_value(2, 2)
        assert mc.evaluate_statistic(stat, np.eye(2)) == pytest.approx(1.0, rel=1e-12)

    def test_sup_forms_inner_centering(self):
        # sup over {I, -I} at x = (1, 0): with variances (1, 0) both centered
        # forms vanish; with unit variances they are -1 and +1
        fam = [np.eye(2), -np.eye(2)]
        stat0 = mc.StatisticSpec.sup_quadratic_forms(fam, np.array([1.0, 0.0]))
        assert mc.evaluate_statistic(stat0, np.array([1.0, 0.0])) == 0.0
        stat1 = mc.StatisticSpec.sup_quadratic_forms(fam, np.array([1.0, 1.0]))
        assert mc.evaluate_statistic(stat1, np.array([1.0, 0.0])) == 1.0

    def test_quadratic_form_hand_value(self):
        a = np.array([[0.0, 1.0], [1.0, 0.0]])
        stat = mc.StatisticSpec.quadratic_form(a, np.ones(2))
        # raw functional value; the analytic center is zero for a hollow matrix
        assert mc.evaluate_statistic(stat, np.array([1.0, 2.0])) == pytest.approx(4.0, rel=1e-14)
        assert stat.center == 0.0

    def test_series_norm(self):
        w = np.array([[1.0, 0.0], [0.0, -1.0]])
        stat = mc.StatisticSpec.random_series_norm(w, center=0.0)
        assert mc.evaluate_statistic(stat, np.array([2.0, 5.0])) == pytest.approx(2.0, rel=1e-14)

    def test_max_product_normalization(self):
        stat = mc.StatisticSpec.max_product(2, 4)
        draw = np.ones((2, 4))
        assert mc.evaluate_statistic(stat, draw) == pytest.approx(1.0, rel=1e-14)

    def test_shape_mismatch(self):
        stat = mc.StatisticSpec.norm_deviation(3)
        with pytest.raises(ValueError):
            mc.evaluate_statistic(stat, np.zeros(4))

    def test_product_of_norms_equals_tensor_norm(self):
        spec = TensorSpec(3, 3, DistributionSpec.gaussian())
        stat = mc.StatisticSpec.product_of_norms(3, 3)
        for k in range(5):
            flat, coords = dist.sample_tensor(spec, (77, k))
            val = mc.evaluate_statistic(stat, coords)
            assert val == pytest.approx(float(np.linalg.norm(flat)), rel=1e-12)


class TestBinomialCI:
    def test_zero_count_one_sided(self):
        lo, hi = mc.binomial_ci(0, 100, 0.95, two_sided=False)
        assert lo == 0.0
        assert hi == pytest.approx(1.0 - 0.05 ** (1.0 / 100.0), rel=1e-10)

    def test_full_count(self):
        lo, hi = mc.binomial_ci(100, 100, 0.95)
        assert hi == 1.0
        assert lo == pytest.approx(0.025 ** (1.0 / 100.0), rel=1e-10)

    def test_contains_p_hat(self):
        for k in (0, 1, 17, 250, 400):
            lo, hi = mc.binomial_ci(k, 400, 0.95)
            assert lo <= k / 400 <= hi

    def test_coverage_sanity(self):
        # 95% CIs for Bernoulli(0.1) should cover 0.1 in >= 90% of meta-trials
        rng = np.random.default_rng(123)
        n, trials = 400, 200
        covered = 0
        for k in rng.binomial(n, 0.1, size=trials):
            lo, hi = mc.binomial_ci(int(k), n, 0.95)
            covered += lo <= 0.1 <= hi
        assert covered >= 0.9 * trials

    def test_rejects(self):
        with pytest.raises(ValueError):
            mc.binomial_ci(5, 4, 0.95)
        with pytest.raises(ValueError):
            mc.binomial_ci(0, 10, 1.0)


class TestEmpiricalTail:
    def test_one_sided_gaussian_coordinate_at_zero(self):
        stat = mc.StatisticSpec(
            "random-series-norm", {"w": np.ones((1, 1)), "n": 1}, "analytic", 0.0, 1.0, False
        )
        est = mc.empirical_tail(DistributionSpec.gaussian(), stat, [0.0, 1.0], 20000, seed=5)
        assert est.p_hat[0] == pytest.approx(0.5, abs=0.02)
        assert est.p_hat[1] == pytest.approx(0.1587, abs=0.02)

    def test_counts_monotone(self):
        stat = mc.StatisticSpec.norm_deviation(4)
        est = mc.empirical_tail(DistributionSpec.gaussian(), stat, np.linspace(0, 3, 12), 20000, seed=6)
        assert np.all(np.diff(est.counts) <= 0)
        assert np.all(est.ci_low <= est.p_hat) and np.all(est.p_hat <= est.ci_high)

    def test_worker_determinism(self):
        stat = mc.StatisticSpec.quadratic_form(np.eye(8), np.ones(8))
        grid = np.linspace(0.0, 20.0, 9)
        outs = [
            mc.empirical_tail(DistributionSpec.weibull(1.0), stat, grid, 30000, seed=7, workers=w)
            for w in (1, 4, 16)
        ]
        texts = {o.to_csv_text() for o in outs}
        assert len(texts) == 1
        import json

        jsons = {json.dumps(o.to_json_dict(), sort_keys=True) for o in outs}
        assert len(jsons) == 1

    def test_prefix_stability_of_chunks(self):
        stat = mc.StatisticSpec.norm_deviation(3)
        grid = np.array([0.0, 0.5, 1.0])
        small = mc.empirical_tail(DistributionSpec.gaussian(), stat, grid, 4096, seed=8)
        chunk0 = mc._chunk_counts(
            DistributionSpec.gaussian(), stat, 8, mc.STREAM_MAIN, 0, 4096, small.center, grid
        )
        assert np.array_equal(small.counts, chunk0)

    def test_estimated_centering_records_se(self):
        stat = mc.StatisticSpec.largest_singular_value(3, 3)
        est = mc.empirical_tail(
            DistributionSpec.gaussian(), stat, [0.5, 1.0], 4096, seed=9, pilot_n=20000
        )
        assert est.center > 0 and est.center_se > 0

    def test_csv_format(self):
        stat = mc.StatisticSpec.norm_deviation(2)
        est = mc.empirical_tail(DistributionSpec.gaussian(), stat, [0.1], 1000, seed=10)
        lines = est.to_csv_text().strip().split("\n")
        assert lines[0] == "t,N,count,p_hat,ci_low,ci_high"
        assert len(lines) == 2
        fields = lines[1].split(",")
        assert int(fields[1]) == 1000

    def test_grid_validation(self):
        stat = mc.StatisticSpec.norm_deviation(2)
        with pytest.raises(ValueError):
            mc.empirical_tail(DistributionSpec.gaussian(), stat, [2.0, 1.0], 100, seed=0)


class TestCenterEstimate:
    def test_constant_statistic_has_zero_se(self):
        stat = mc.StatisticSpec.norm_deviation(3)
        mean, se = mc.center_estimate(DistributionSpec.constant(), stat, 5000, seed=0)
        assert mean == 0.0 and se == 0.0

    def test_rademacher_coordinate(self):
        stat = mc.StatisticSpec(
            "random-series-norm", {"w": np.ones((1, 1)), "n": 1}, "analytic", 0.0, 1.0, True
        )
        n = 40000
        mean, se = mc.center_estimate(DistributionSpec.rademacher(), stat, n, seed=1)
        assert abs(mean) <= 3.0 / math.sqrt(n)
        assert se == pytest.approx(1.0 / math.sqrt(n), rel=0.05)

    def test_chi_mean_oracle(self):
        # E ||X||_2 for 4 iid gaussians: sqrt(2) Gamma(2.5) / Gamma(2)
        stat = mc.StatisticSpec.norm_deviation(4)
        n = 10**5
        mean, se = mc.center_estimate(DistributionSpec.gaussian(), stat, n, seed=2)
        oracle = math.sqrt(2.0) * float(gamma_fn(2.5) / gamma_fn(2.0))
        assert mean == pytest.approx(oracle, abs=4 * se)


class TestDiagComparison:
    def test_identity_family(self):
        rep = mc.diag_comparison_check([np.eye(4)], DistributionSpec.gaussian(), 4, 20000, seed=0)
        assert rep.passed
        assert rep.diag_mean == pytest.approx(rep.full_mean, rel=1e-12)

    def test_diagonal_matrix_family(self):
        rep = mc.diag_comparison_check(
            [np.diag([1.0, 0.0])], DistributionSpec.gaussian(), 2, 20000, seed=1
        )
        assert rep.passed
        assert rep.diag_mean == pytest.approx(rep.full_mean, rel=1e-12)

    def test_hollow_matrix_family(self):
        rep = mc.diag_comparison_check(
            [np.array([[0.0, 1.0], [1.0, 0.0]])], DistributionSpec.gaussian(), 2, 20000, seed=2
        )
        assert rep.passed
        assert rep.diag_mean == 0.0
        assert rep.full_mean > 0.5

    def test_random_families(self):
        rng = np.random.default_rng(3)
        for trial in range(5):
            mats = []
            for _ in range(3):
                g = rng.standard_normal((6, 6))
                mats.append((g + g.T) / 2.0)
            rep = mc.diag_comparison_check(mats, DistributionSpec.weibull(1.0), 6, 30000, seed=trial)
            assert rep.passed


class TestSupNormEstimate:
    def test_single_identity(self):
        mean, se = mc.estimate_sup_norm([np.eye(4)], DistributionSpec.gaussian(), 4, 50000, seed=4)
        oracle = math.sqrt(2.0) * float(gamma_fn(2.5) / gamma_fn(2.0))
        assert mean == pytest.approx(oracle, abs=5 * se)
