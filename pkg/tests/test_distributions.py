import math

import numpy as np
import pytest
from scipy import special

from subweibull import distributions as dist
from subweibull.distributions import DistributionSpec, TensorSpec


class TestSpecValidation:
    def test_uniform_needs_symmetric_interval(self):
        with pytest.raises(ValueError):
            DistributionSpec.uniform(1.0, 0.5)
        with pytest.raises(ValueError):
            DistributionSpec.uniform(-1.0, 2.0)
        DistributionSpec.uniform(-3.0, 3.0)

    def test_weibull_shape_range(self):
        with pytest.raises(ValueError):
            DistributionSpec.weibull(0.0)
        with pytest.raises(ValueError):
            DistributionSpec.weibull(2.5)

    def test_truncated_needs_positive_level(self):
        base = DistributionSpec.gaussian()
        with pytest.raises(ValueError):
            DistributionSpec.truncated(base, 0.0)
        with pytest.raises(ValueError):
            DistributionSpec.truncated(DistributionSpec.truncated(base, 1.0), 1.0)

    def test_dict_round_trip(self):
        specs = [
            DistributionSpec.constant(),
            DistributionSpec.rademacher(),
            DistributionSpec.uniform(-2.0, 2.0),
            DistributionSpec.gaussian(),
            DistributionSpec.weibull(0.7),
            DistributionSpec.truncated(DistributionSpec.weibull(1.0), 3.0),
        ]
        for s in specs:
            assert DistributionSpec.from_dict(s.to_dict()) == s

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ValueError):
            DistributionSpec.from_dict({"family": "rademacher", "oops": 1})
        with pytest.raises(ValueError):
            DistributionSpec.from_dict({"family": "no-such"})


class TestVariances:
    def test_closed_forms(self):
        assert DistributionSpec.constant().variance() == 0.0
        assert DistributionSpec.rademacher().variance() == 1.0
        assert DistributionSpec.uniform(-3.0, 3.0).variance() == pytest.approx(3.0, rel=1e-14)
        assert DistributionSpec.gaussian().variance() == 1.0
        assert DistributionSpec.weibull(0.5).variance() == pytest.approx(float(special.gamma(5.0)), rel=1e-12)
        assert DistributionSpec.weibull(2.0).variance() == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize(
        "base",
        [
            DistributionSpec.rademacher(),
            DistributionSpec.uniform(-2.0, 2.0),
            DistributionSpec.gaussian(),
            DistributionSpec.weibull(1.0),
        ],
    )
    def test_truncated_variance_matches_samples(self, base):
        level = 1.5
        spec = DistributionSpec.truncated(base, level)
        x = dist.sample(spec, 4 * 10**5, (5, 0))
        assert float((x**2).mean()) == pytest.approx(spec.variance(), rel=0.02, abs=1e-4)


class TestSampling:
    def test_constant(self):
        assert np.array_equal(dist.sample(DistributionSpec.constant(), 3, (0, 0)), np.zeros(3))

    def test_rademacher_moments(self):
        n = 10**5
        x = dist.sample(DistributionSpec.rademacher(), n, (1, 0))
        assert set(np.unique(x)) == {-1.0, 1.0}
        assert abs(x.mean()) <= 3.0 / math.sqrt(n)
        assert abs(x.var() - 1.0) <= 3.0 / math.sqrt(n)

    def test_weibull_exact_tail(self):
        n = 4 * 10**5
        x = dist.sample(DistributionSpec.weibull(1.0), n, (2, 0))
        for t in (0.5, 1.0, 2.0, 3.0):
            p = math.exp(-t)
            phat = float(np.mean(np.abs(x) >= t))
            # 99.9% band per comparison (several t values are checked)
            assert abs(phat - p) <= 3.29 * math.sqrt(p * (1 - p) / n)

    @pytest.mark.parametrize("shape", [0.5, 2.0])
    def test_weibull_tail_other_shapes(self, shape):
        n = 4 * 10**5
        x = dist.sample(DistributionSpec.weibull(shape), n, (3, 0))
        for t in (0.5, 1.0, 2.0):
            p = math.exp(-(t**shape))
            phat = float(np.mean(np.abs(x) >= t))
            assert abs(phat - p) <= 3.29 * math.sqrt(p * (1 - p) / n) + 1e-12

    def test_bit_reproducibility_and_prefix(self):
        spec = DistributionSpec.weibull(0.8)
        a = dist.sample(spec, 10_000, (42, 3))
        b = dist.sample(spec, 10_000, (42, 3))
        assert np.array_equal(a, b)
        c = dist.sample(spec, 20_000, (42, 3))
        assert np.array_equal(a, c[:10_000])
        d = dist.sample(spec, 10_000, (42, 4))
        assert not np.array_equal(a, d)

    def test_count_zero(self):
        assert dist.sample(DistributionSpec.gaussian(), 0, (0, 0)).size == 0


class TestTensor:
    def test_single_entry_is_product(self):
        flat, coords = dist.sample_tensor(TensorSpec(1, 3, DistributionSpec.gaussian()), (9, 0))
        assert flat.shape == (1,)
        assert flat[0] == pytest.approx(float(np.prod(coords[:, 0])), rel=1e-14)

    def test_kronecker_layout_last_index_fastest(self):
        spec = TensorSpec(2, 2, DistributionSpec.gaussian())
        flat, coords = dist.sample_tensor(spec, (10, 0))
        x1, x2 = coords
        for i1 in range(2):
            for i2 in range(2):
                assert flat[i1 * 2 + i2] == pytest.approx(x1[i1] * x2[i2], rel=1e-14)
        # hand Kronecker example in the same layout
        assert np.array_equal(np.kron([1.0, 2.0], [3.0, 4.0]), [3.0, 4.0, 6.0, 8.0])

    def test_euclidean_norm_factorizes(self):
        flat, coords = dist.sample_tensor(TensorSpec(4, 3, DistributionSpec.weibull(1.0)), (11, 0))
        assert np.linalg.norm(flat) == pytest.approx(
            float(np.prod(np.linalg.norm(coords, axis=1))), rel=1e-12
        )

    @pytest.mark.parametrize(
        "coord",
        [
            DistributionSpec.rademacher(),
            DistributionSpec.uniform(-1.0, 1.0),
            DistributionSpec.gaussian(),
            DistributionSpec.weibull(1.0),
        ],
    )
    def test_unit_variance_enforced(self, coord):
        flat, coords = dist.sample_tensor(TensorSpec(10**6, 1, coord), (12, 0))
        assert float(coords.var()) == pytest.approx(1.0, rel=0.01)

    def test_budget(self):
        with pytest.raises(dist.ResourceLimitError):
            dist.sample_tensor(TensorSpec(100, 5, DistributionSpec.gaussian()), (0, 0))

    def test_constant_coordinates_rejected(self):
        with pytest.raises(ValueError):
            TensorSpec(2, 2, DistributionSpec.constant())


class TestTruncate:
    def test_hand_example(self):
        y, z = dist.truncate(np.array([3.0, -1.0, 5.0]), 4.0)
        assert np.array_equal(y, [3.0, -1.0, 0.0])
        assert np.array_equal(z, [0.0, 0.0, 5.0])

    def test_level_at_max_gives_zero_remainder(self):
        x = np.array([1.0, -2.0, 0.5])
        y, z = dist.truncate(x, float(np.abs(x).max()))
        assert np.array_equal(z, np.zeros(3))
        assert np.array_equal(y, x)

    def test_zero_vector(self):
        y, z = dist.truncate(np.zeros(2), 1.0)
        assert np.array_equal(y, np.zeros(2))
        assert np.array_equal(z, np.zeros(2))

    def test_identity_and_disjoint_support(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal(1000) * 3
        y, z = dist.truncate(x, 2.0)
        assert np.array_equal(y + z, x)
        assert np.all(y * z == 0.0)


class TestTruncationLevel:
    def test_constant_zero(self):
        est = dist.truncation_level(DistributionSpec.constant(), 5, (0, 0), 100)
        assert est.value == 0.0

    def test_rademacher_exact_eight(self):
        est = dist.truncation_level(DistributionSpec.rademacher(), 7, (1, 0), 500)
        assert est.value == 8.0
        assert est.standard_error == 0.0

    def test_gaussian_against_direct_simulation(self):
        n, reps = 100, 10**5
        est = dist.truncation_level(DistributionSpec.gaussian(), n, (2, 0), reps)
        rng = np.random.default_rng(998)  # independent oracle stream
        oracle = 8.0 * np.abs(rng.standard_normal((reps, n))).max(axis=1).mean()
        assert est.value == pytest.approx(oracle, rel=0.01)
