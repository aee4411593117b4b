import numpy as np
import pytest

from deconvldp import (
    Dataset,
    Kernel,
    ParameterError,
    SupportBox,
    deconv_kde,
    default_bandwidth,
    default_eval_grid,
    empirical_cf,
    ise,
    kde,
    laplace_scales,
    naive_kde,
    nonneg_renormalize,
    privatize,
    sample_inputs,
)
from deconvldp.density import EstimateGrid
from deconvldp.synthdata import MIXTURE_SUPPORT, SyntheticSpec


class TestKde:
    def test_single_point_at_own_location(self):
        data = Dataset(np.array([[1.3]]))
        est = kde(data, Kernel("gaussian", 1), 2.0, np.array([1.3]))
        assert est.values[0] == pytest.approx(1 / np.sqrt(2 * np.pi) / 2.0)

    def test_two_point_symmetry(self):
        data = Dataset(np.array([[-1.0], [1.0]]))
        k = Kernel("gaussian", 1)
        h = 0.7
        est = kde(data, k, h, np.array([-0.4, 0.0, 0.4]))
        by_hand = (k.factor((0 - -1) / h) + k.factor((0 - 1) / h)) / (2 * h)
        assert est.values[1] == pytest.approx(by_hand, rel=1e-12)
        assert est.values[0] == pytest.approx(est.values[2], rel=1e-12)

    def test_integrates_to_one(self):
        rng = np.random.default_rng(5)
        data = Dataset(rng.standard_normal((1000, 1)))
        h = default_bandwidth(1000, 1.0)
        grid = np.linspace(-8, 8, 2001)
        est = kde(data, Kernel("gaussian", 1), h, grid)
        assert np.trapezoid(est.values, grid) == pytest.approx(1.0, abs=1e-2)

    def test_rejects_bad_bandwidth(self):
        data = Dataset(np.array([[0.0]]))
        with pytest.raises(ParameterError):
            kde(data, Kernel("gaussian", 1), 0.0, np.array([0.0]))

    def test_nonnegative_values(self):
        rng = np.random.default_rng(1)
        data = Dataset(rng.standard_normal((50, 1)))
        est = kde(data, Kernel("cauchy", 1), 0.3, np.linspace(-5, 5, 101))
        assert np.all(est.values >= 0)


class TestDeconvKde:
    def test_zero_noise_reduces_to_kde(self):
        rng = np.random.default_rng(2)
        z = Dataset(rng.standard_normal((200, 1)), privatized=True)
        grid = np.linspace(-4, 4, 101)
        for family in ("gaussian", "cauchy"):
            k = Kernel(family, 1)
            plain = kde(z, k, 0.4, grid)
            naive = naive_kde(z, k, 0.4, grid)
            dec = deconv_kde(z, k, 0.4, [0.0], grid)
            np.testing.assert_allclose(dec.values, plain.values, atol=1e-12)
            np.testing.assert_allclose(naive.values, plain.values, atol=1e-12)

    def test_conditional_unbiasedness_monte_carlo(self):
        # averaging over noise redraws recovers the noiseless KDE
        spec = SyntheticSpec(distribution="mixture", n=200, seed=9)
        raw = sample_inputs(spec)
        params = laplace_scales(MIXTURE_SUPPORT, 10.0)
        k = Kernel("cauchy", 1)
        h = 0.3
        points = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
        reference = kde(raw, k, h, points).values
        redraws = 500
        samples = np.empty((redraws, points.size))
        for m in range(redraws):
            z = privatize(raw, params, seed=m)
            samples[m] = deconv_kde(z, k, h, params.scales, points).values
        mean = samples.mean(axis=0)
        se = samples.std(axis=0, ddof=1) / np.sqrt(redraws)
        np.testing.assert_array_less(np.abs(mean - reference), 3 * se)

    def test_naive_kde_flattens_the_peak(self, truncated_mixture_pdf):
        spec = SyntheticSpec(distribution="mixture", n=10_000, seed=3)
        raw = sample_inputs(spec)
        params = laplace_scales(MIXTURE_SUPPORT, 10.0)
        z = privatize(raw, params, seed=17)
        k = Kernel("cauchy", 1)
        h = default_bandwidth(raw.n, float(np.std(raw.records)))
        grid = np.linspace(-5, 5, 501)
        peak_raw = kde(raw, k, h, grid).values.max()
        peak_naive = naive_kde(z, k, h, grid).values.max()
        assert peak_naive < peak_raw

    def test_naive_matches_kde_on_z_records(self):
        rng = np.random.default_rng(4)
        z = Dataset(rng.standard_normal((100, 1)), privatized=True)
        grid = np.linspace(-3, 3, 50)
        a = naive_kde(z, Kernel("cauchy", 1), 0.5, grid)
        b = kde(z, Kernel("cauchy", 1), 0.5, grid)
        np.testing.assert_array_equal(a.values, b.values)
        assert a.estimator_tag == "naive_kde"

    def test_rejects_mismatched_scales(self):
        z = Dataset(np.zeros((5, 1)), privatized=True)
        with pytest.raises(ParameterError):
            deconv_kde(z, Kernel("cauchy", 1), 0.5, [0.1, 0.2], np.array([0.0]))


class TestEmpiricalCf:
    def test_origin_is_one(self):
        z = Dataset(np.array([[1.0], [2.0]]))
        assert empirical_cf(z, [0.0]) == pytest.approx(1 + 0j)

    def test_single_record(self):
        z = Dataset(np.array([[np.pi / 2]]))
        assert empirical_cf(z, [1.0]) == pytest.approx(1j, abs=1e-12)

    def test_cf_inversion_reproduces_deconv_kde(self):
        # inverse Fourier of Phi_K(h t) * ECF(t) / Phi_n(t) is the deconvoluting KDE
        rng = np.random.default_rng(6)
        z = Dataset(rng.standard_normal((40, 1)) * 0.8, privatized=True)
        k = Kernel("gaussian", 1)
        h, b = 0.5, 0.3
        t = np.linspace(-40, 40, 8001)
        ecf = empirical_cf(z, t[:, None])
        integrand = np.exp(-0.5 * (h * t) ** 2) * ecf * (1 + b**2 * t**2)
        xs = np.linspace(-3, 3, 25)
        direct = deconv_kde(z, k, h, [b], xs).values
        for x, want in zip(xs, direct):
            val = np.trapezoid(np.exp(-1j * t * x) * integrand, t).real / (2 * np.pi)
            assert val == pytest.approx(want, abs=1e-3)


class TestBandwidthRule:
    def test_large_n_arithmetic(self):
        assert default_bandwidth(100_000, 1.0) == pytest.approx(0.106)

    def test_power_of_two(self):
        assert default_bandwidth(32, 2.0) == pytest.approx(1.06)

    def test_homogeneity_in_scale(self):
        assert default_bandwidth(500, 2.0) == pytest.approx(
            2 * default_bandwidth(500, 1.0)
        )

    def test_rejects_tiny_n(self):
        with pytest.raises(ParameterError):
            default_bandwidth(1, 1.0)


class TestIse:
    def test_zero_when_equal(self):
        grid = np.linspace(0, 1, 101)
        est = EstimateGrid(grid, np.ones_like(grid), 0.1, "kde")
        assert ise(est, lambda x: 1.0) == pytest.approx(0.0)

    def test_constant_offset(self):
        grid = np.linspace(0, 2, 401)
        est = EstimateGrid(grid, np.full_like(grid, 1.25), 0.1, "kde")
        assert ise(est, lambda x: 1.0) == pytest.approx(0.25**2 * 2.0, rel=1e-10)

    def test_rejects_unsorted_grid(self):
        est = EstimateGrid(np.array([1.0, 0.0]), np.array([0.0, 0.0]), 0.1, "kde")
        with pytest.raises(ParameterError):
            ise(est, lambda x: 0.0)


class TestGridAndPostprocess:
    def test_default_grid_covers_noise_spread(self):
        support = SupportBox([0.0], [1.0])
        grid = default_eval_grid(support, [0.5], 0.25, family="gaussian")
        assert grid[0] == pytest.approx(0.0 - 4 * 0.5 - 4 * 0.25)
        assert grid[-1] == pytest.approx(1.0 + 4 * 0.5 + 4 * 0.25)
        assert grid.size == 512

    def test_cauchy_grid_is_wider(self):
        support = SupportBox([0.0], [1.0])
        g = default_eval_grid(support, [0.5], 0.25, family="gaussian")
        c = default_eval_grid(support, [0.5], 0.25, family="cauchy")
        assert c[0] < g[0] and c[-1] > g[-1]

    def test_nonneg_renormalize(self):
        grid = np.linspace(-1, 1, 201)
        values = np.where(np.abs(grid) < 0.5, 1.0, -0.1)
        est = EstimateGrid(grid, values, 0.1, "deconv_kde")
        fixed = nonneg_renormalize(est)
        assert np.all(fixed.values >= 0)
        assert np.trapezoid(fixed.values, grid) == pytest.approx(1.0, rel=1e-10)
