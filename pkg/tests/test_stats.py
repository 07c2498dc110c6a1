import numpy as np
import pytest
from scipy import stats as sstats

from gano.errors import ConfigurationError, DegenerateInputError, InvalidInputError
from gano.grid import FieldBatch, Grid2D
from gano.stats import (
    Histogram,
    circular_moment,
    circular_skewness,
    circular_variance,
    histogram_w1,
    pointwise_histogram,
    radial_autocorrelation,
)

from oracles import circular_stats_reference, pair_sum_autocorrelation


class TestPointwiseHistogram:
    def test_constant_batch_single_bin(self):
        batch = FieldBatch(Grid2D(8, 8), np.full((3, 8, 8, 1), 0.31))
        h = pointwise_histogram(batch, 10, (0.0, 1.0))
        assert h.masses[3] == 1.0 and h.masses.sum() == 1.0
        assert h.count == 3 * 64

    def test_symmetric_data(self):
        rng = np.random.default_rng(0)
        v = rng.standard_normal(5000)
        paired = np.concatenate([v, -v])
        h = pointwise_histogram(paired, 40, (-5.0, 5.0))
        assert np.max(np.abs(h.masses - h.masses[::-1])) <= 1e-12

    def test_gaussian_against_cdf_oracle(self):
        rng = np.random.default_rng(1)
        n = 10**6
        v = rng.standard_normal(n)
        h = pointwise_histogram(v, 50, (-4.0, 4.0))
        cdf = sstats.norm.cdf(h.edges)
        expected = np.diff(cdf)
        expected[0] += cdf[0]  # overflow mass folded into the end bins
        expected[-1] += 1.0 - cdf[-1]
        tol = 4.0 * np.sqrt(expected * (1.0 - expected) / n)
        assert np.all(np.abs(h.masses - expected) <= tol)

    def test_overflow_goes_to_end_bins(self):
        h = pointwise_histogram(np.array([-10.0, 10.0, 0.5]), 4, (0.0, 1.0))
        assert h.masses[0] >= 1 / 3 and h.masses[-1] >= 1 / 3

    def test_empty_batch(self):
        with pytest.raises(InvalidInputError):
            pointwise_histogram(np.array([]), 4, (0.0, 1.0))

    def test_masses_sum_to_one(self):
        rng = np.random.default_rng(2)
        h = pointwise_histogram(rng.standard_normal(10_001), 17, (-1.0, 2.0))
        assert abs(h.masses.sum() - 1.0) <= 1e-12


class TestHistogramW1:
    def edges(self, n=4, w=0.25):
        return np.arange(n + 1) * w

    def test_identical(self):
        h = Histogram(self.edges(), np.array([0.25, 0.25, 0.25, 0.25]), 4)
        assert histogram_w1(h, h) == 0.0

    def test_adjacent_unit_masses(self):
        e = self.edges()
        h1 = Histogram(e, np.array([1.0, 0, 0, 0]), 1)
        h2 = Histogram(e, np.array([0, 1.0, 0, 0]), 1)
        assert histogram_w1(h1, h2) == pytest.approx(0.25)

    def test_against_transport_oracle(self):
        rng = np.random.default_rng(3)
        e = self.edges()
        for _ in range(20):
            m1 = rng.random(4)
            m1 /= m1.sum()
            m2 = rng.random(4)
            m2 /= m2.sum()
            ours = histogram_w1(Histogram(e, m1, 1), Histogram(e, m2, 1))
            oracle = sstats.wasserstein_distance(e[:-1], e[:-1], m1, m2)
            assert abs(ours - oracle) <= 1e-10

    def test_metric_properties(self):
        rng = np.random.default_rng(4)
        e = self.edges()
        hs = []
        for _ in range(3):
            m = rng.random(4)
            hs.append(Histogram(e, m / m.sum(), 1))
        a, b, c = (histogram_w1(hs[i], hs[j]) for i, j in [(0, 1), (1, 2), (0, 2)])
        assert histogram_w1(hs[0], hs[1]) == histogram_w1(hs[1], hs[0])
        assert c <= a + b + 1e-12

    def test_edge_mismatch(self):
        h1 = Histogram(self.edges(), np.full(4, 0.25), 1)
        h2 = Histogram(self.edges(w=0.5), np.full(4, 0.25), 1)
        with pytest.raises(ConfigurationError):
            histogram_w1(h1, h2)


class TestRadialAutocorrelation:
    def test_rho_at_zero(self):
        rng = np.random.default_rng(5)
        batch = FieldBatch(Grid2D(16, 16), rng.standard_normal((10, 16, 16, 1)))
        curve = radial_autocorrelation(batch, 8)
        assert curve.r[0] == 0.0
        assert curve.rho[0] == pytest.approx(1.0, abs=1e-12)

    def test_white_noise_decorrelates(self):
        rng = np.random.default_rng(6)
        batch = FieldBatch(Grid2D(32, 32), rng.standard_normal((1000, 32, 32, 1)))
        curve = radial_autocorrelation(batch, 16)
        assert np.max(np.abs(curve.rho[1:])) <= 0.02

    def test_cosine_mode_against_pair_sum_oracle(self):
        m = 16
        x = np.arange(m) / m
        f = np.cos(2 * np.pi * x)[:, None] * np.ones((1, m))
        batch = FieldBatch(Grid2D(m, m), f[None, ..., None])
        curve = radial_autocorrelation(batch, m // 2)
        r_o, rho_o = pair_sum_autocorrelation(f, m // 2)
        assert np.array_equal(curve.r, r_o)
        assert np.max(np.abs(curve.rho - rho_o)) <= 1e-6

    def test_distances_bounded_by_half(self):
        rng = np.random.default_rng(7)
        batch = FieldBatch(Grid2D(16, 16), rng.standard_normal((2, 16, 16, 1)))
        curve = radial_autocorrelation(batch, 8)
        assert curve.r.max() <= 0.5

    def test_shift_and_scale_invariance(self):
        rng = np.random.default_rng(8)
        v = rng.standard_normal((5, 16, 16, 1))
        base = radial_autocorrelation(FieldBatch(Grid2D(16, 16), v), 8)
        moved = radial_autocorrelation(FieldBatch(Grid2D(16, 16), -2.5 * v + 7.0), 8)
        assert np.max(np.abs(base.rho - moved.rho)) <= 1e-10

    def test_zero_variance_sample_reported(self):
        v = np.zeros((2, 8, 8, 1))
        v[0] = np.random.default_rng(9).standard_normal((8, 8, 1))
        with pytest.raises(DegenerateInputError, match="sample 1"):
            radial_autocorrelation(FieldBatch(Grid2D(8, 8), v), 4)


class TestCircularMoments:
    def test_coherent_angles(self):
        m = circular_moment(np.full(17, np.pi / 3), 1)
        assert m.r == pytest.approx(1.0, abs=1e-12)
        assert m.phi == pytest.approx(np.pi / 3, abs=1e-12)

    def test_antipodal_cancellation(self):
        m = circular_moment(np.array([0.0, np.pi]), 1)
        assert m.r <= 1e-12
        assert m.phi is None

    def test_three_angle_case(self):
        m = circular_moment(np.array([0.0, np.pi / 2, np.pi]), 1)
        assert m.r == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert m.phi == pytest.approx(np.pi / 2, abs=1e-12)

    def test_empty_input(self):
        with pytest.raises(InvalidInputError):
            circular_moment(np.array([]), 1)


class TestCircularVariance:
    def test_constant(self):
        assert circular_variance(np.full(9, -2.2)) == pytest.approx(0.0, abs=1e-12)

    def test_antipodal(self):
        assert circular_variance(np.array([0.0, np.pi])) == pytest.approx(1.0, abs=1e-12)

    def test_three_angle_case(self):
        assert circular_variance(np.array([0.0, np.pi / 2, np.pi])) == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_rotation_invariance(self):
        rng = np.random.default_rng(10)
        theta = rng.uniform(-np.pi, np.pi, 200)
        rotated = np.angle(np.exp(1j * (theta + 1.2345)))
        assert abs(circular_variance(theta) - circular_variance(rotated)) <= 1e-12


class TestCircularSkewness:
    def test_symmetric_set_is_zero(self):
        assert circular_skewness(np.array([-0.7, 0.0, 0.7])) == pytest.approx(0.0, abs=1e-12)

    def test_point_mass_degenerate(self):
        with pytest.raises(DegenerateInputError):
            circular_skewness(np.full(5, 1.0))

    def test_hand_case(self):
        theta = np.array([0.0, 0.0, np.pi / 2])
        ref = circular_stats_reference(theta)
        assert circular_skewness(theta) == pytest.approx(ref["skewness"], abs=1e-12)

    def test_reflection_antisymmetry(self):
        rng = np.random.default_rng(11)
        theta = rng.uniform(-np.pi, np.pi, 150)
        assert circular_skewness(-theta) == pytest.approx(-circular_skewness(theta), abs=1e-12)

    def test_against_direct_oracle_random_sets(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            theta = rng.uniform(-np.pi, np.pi, rng.integers(2, 40))
            ref = circular_stats_reference(theta)
            assert circular_variance(theta) == pytest.approx(ref["variance"], abs=1e-10)
            if ref["skewness"] is not None:
                assert circular_skewness(theta) == pytest.approx(ref["skewness"], abs=1e-10)
