import math

import numpy as np
import pytest

import treefire.distributions as dist
import treefire.stats as stats


class TestKs:
    def test_null_calibration(self):
        # exact-null samples must pass at roughly the significance level
        rng = np.random.default_rng(0)
        passes = sum(
            stats.ks_statistic(rng.random(1000), lambda x: np.clip(x, 0, 1)).passed
            for _ in range(200)
        )
        assert passes >= 190  # expect ~198 at the 1% level

    def test_single_exact_draw(self):
        rng = np.random.default_rng(1)
        gof = stats.ks_statistic(rng.random(10_000), lambda x: np.clip(x, 0, 1))
        assert gof.passed
        assert gof.threshold == pytest.approx(1.6276 / math.sqrt(10_000), abs=1e-3)

    def test_point_mass_vs_continuous(self):
        samples = np.full(1000, 0.5)
        gof = stats.ks_statistic(samples, lambda x: np.clip(x, 0, 1))
        assert gof.statistic >= 0.5
        assert not gof.passed

    def test_single_sample_at_median(self):
        gof = stats.ks_statistic([0.5], lambda x: np.clip(x, 0, 1))
        assert gof.statistic == pytest.approx(0.5)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            stats.ks_statistic([], lambda x: x)

    def test_monotone_reparameterization_invariance(self):
        rng = np.random.default_rng(2)
        samples = rng.random(500)
        base = stats.ks_statistic(samples, lambda x: np.clip(x, 0, 1))
        warped = stats.ks_statistic(np.exp(samples), lambda y: np.clip(np.log(y), 0, 1))
        assert warped.statistic == pytest.approx(base.statistic, abs=1e-12)

    def test_statistic_bounds(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            gof = stats.ks_statistic(rng.normal(size=64), lambda x: np.clip(x, 0, 1))
            assert 0.0 <= gof.statistic <= 1.0
            assert gof.passed == (gof.statistic <= gof.threshold)

    def test_nonvectorized_cdf_supported(self):
        gof = stats.ks_statistic([0.1, 0.6, 0.9], lambda x: min(max(float(x), 0.0), 1.0))
        assert 0.0 <= gof.statistic <= 1.0


class TestChiSquare:
    def test_exact_proportional_counts(self):
        pmf = np.array([0.5, 0.3, 0.2])
        gof = stats.chi_square_gof(pmf * 1000, pmf)
        assert gof.statistic == 0.0
        assert gof.passed

    def test_null_calibration(self):
        rng = np.random.default_rng(4)
        pmf = np.array([0.4, 0.3, 0.2, 0.1])
        passes = sum(
            stats.chi_square_gof(rng.multinomial(100_000, pmf), pmf).passed
            for _ in range(100)
        )
        assert passes >= 98

    def test_rejects_shifted_pmf(self):
        rng = np.random.default_rng(5)
        pmf = np.array([0.4, 0.3, 0.2, 0.1])
        shifted = np.array([0.37, 0.33, 0.2, 0.1])
        counts = rng.multinomial(100_000, shifted)
        assert not stats.chi_square_gof(counts, pmf).passed

    def test_pooling_small_bins(self):
        from scipy.stats import chi2

        # all bins comfortably large: nothing pooled, dof = bins - 1
        pmf = np.array([0.5, 0.3, 0.15, 0.04, 0.01])
        gof = stats.chi_square_gof(pmf * 1000, pmf)
        assert gof.threshold == pytest.approx(chi2.ppf(0.99, 4))
        # a tiny tail bin absorbs its neighbor until it reaches min_expected
        pmf = np.array([0.5, 0.3, 0.15, 0.046, 0.004])
        counts = np.array([500, 300, 150, 46, 4])
        gof = stats.chi_square_gof(counts, pmf)
        assert gof.threshold == pytest.approx(chi2.ppf(0.99, 3))
        assert gof.statistic == pytest.approx(0.0, abs=1e-12)

    def test_degenerate_single_bin(self):
        with pytest.raises(ValueError):
            stats.chi_square_gof([3, 2], [0.5, 0.5])  # both pooled: n=5 below min

    def test_bin_mismatch(self):
        with pytest.raises(ValueError):
            stats.chi_square_gof([1, 2, 3], [0.5, 0.5])

    def test_pmf_must_be_normalized(self):
        with pytest.raises(ValueError):
            stats.chi_square_gof([10, 10], [0.4, 0.4])


class TestSummarize:
    def test_single_sample(self):
        s = stats.summarize([3.5])
        assert s.mean == 3.5 and s.stderr == 0.0 and s.min == s.max == 3.5

    def test_two_samples(self):
        assert stats.summarize([0.0, 1.0]).mean == 0.5

    def test_clt_self_test(self):
        rng = np.random.default_rng(6)
        s = stats.summarize(rng.random(1_000_000))
        assert abs(s.mean - 0.5) < 3 * s.stderr

    def test_permutation_invariance(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=100)
        a = stats.summarize(x)
        b = stats.summarize(x[rng.permutation(100)])
        assert a.count == b.count and a.min == b.min and a.max == b.max
        assert a.mean == pytest.approx(b.mean, abs=1e-13)
        assert a.stderr == pytest.approx(b.stderr, abs=1e-13)

    def test_empty(self):
        with pytest.raises(ValueError):
            stats.summarize([])


class TestEcdf:
    def test_step_values(self):
        e = stats.Ecdf.from_samples([1.0, 2.0, 2.0, 5.0])
        assert e(0.5) == 0.0
        assert e(1.0) == 0.25
        assert e(2.0) == 0.75
        assert e(5.0) == 1.0
        assert e(9.0) == 1.0


class TestRandomizedPit:
    def test_exact_uniformity_under_null(self):
        rng = np.random.default_rng(8)
        table = dist.borel_table(10_000)
        draws = dist.borel_sample(rng, table, size=30_000)
        pmf = table.mass / table.cumulative[-1]  # conditioned law the sampler follows
        u = stats.randomized_pit(draws, 1, pmf, rng)
        assert stats.ks_statistic(u, lambda x: np.clip(x, 0, 1)).passed

    def test_out_of_support(self):
        with pytest.raises(ValueError):
            stats.randomized_pit(np.array([4]), 1, np.array([0.5, 0.5]), np.random.default_rng(0))
