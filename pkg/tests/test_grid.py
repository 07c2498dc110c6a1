import numpy as np
import pytest

from gano.errors import ConfigurationError, InvalidInputError
from gano.grid import AngularField, FieldBatch, Grid2D, GridFunction, l2_norm, resample, wrap_phase

from oracles import direct_dft_resample


def grid_fn(m, values):
    return GridFunction(Grid2D(m, m), np.asarray(values, dtype=np.float64))


class TestGrid2D:
    def test_rejects_degenerate_axes(self):
        with pytest.raises(ConfigurationError):
            Grid2D(1, 8)
        with pytest.raises(ConfigurationError):
            Grid2D(8, 0)

    def test_quadrature_weights_sum_to_one(self):
        for m1, m2 in [(2, 2), (16, 16), (7, 13), (64, 32)]:
            g = Grid2D(m1, m2)
            assert abs(g.weight * g.n_nodes - 1.0) < 1e-15

    def test_coords_periodic_convention(self):
        g = Grid2D(4, 8)
        c = g.coords()
        assert c.shape == (4, 8, 2)
        assert c[0, 0, 0] == 0.0 and c[3, 0, 0] == 0.75  # j/m1, no duplicated endpoint
        assert c.max() < 1.0


class TestL2Norm:
    def test_constant_function(self):
        f = grid_fn(8, np.full((8, 8, 1), 3.0))
        assert abs(l2_norm(f) - 3.0) < 1e-14

    def test_zero_function(self):
        f = grid_fn(8, np.zeros((8, 8, 2)))
        assert l2_norm(f) == 0.0

    def test_sine_mode(self):
        g = Grid2D(64, 64)
        x = g.coords()
        f = GridFunction(g, np.sin(2 * np.pi * x[..., 0])[..., None])
        assert abs(l2_norm(f) - 1.0 / np.sqrt(2.0)) <= 1e-10

    def test_homogeneity(self):
        rng = np.random.default_rng(0)
        v = rng.standard_normal((16, 16, 3))
        f = grid_fn(16, v)
        for alpha in (-2.5, 0.0, 0.3, 7.0):
            scaled = grid_fn(16, alpha * v)
            assert abs(l2_norm(scaled) - abs(alpha) * l2_norm(f)) <= 1e-12 * max(1.0, l2_norm(f))

    def test_rejects_nonfinite(self):
        v = np.zeros((4, 4, 1))
        v[0, 0, 0] = np.nan
        with pytest.raises(InvalidInputError):
            grid_fn(4, v)

    def test_batch_norms(self):
        rng = np.random.default_rng(1)
        vals = rng.standard_normal((3, 8, 8, 1))
        batch = FieldBatch(Grid2D(8, 8), vals)
        singles = [l2_norm(batch[i]) for i in range(3)]
        assert np.allclose(l2_norm(batch), singles, atol=1e-14)


class TestResample:
    def test_band_limited_exact_upsample(self):
        def f(g):
            x = g.coords()
            return GridFunction(g, np.cos(2 * np.pi * (x[..., 0] + 2 * x[..., 1]))[..., None])

        up = resample(f(Grid2D(16, 16)), Grid2D(32, 32))
        assert np.max(np.abs(up.values - f(Grid2D(32, 32)).values)) <= 1e-10

    def test_band_limited_exact_downsample(self):
        def f(g):
            x = g.coords()
            return GridFunction(g, np.sin(2 * np.pi * (3 * x[..., 0] - x[..., 1]))[..., None])

        down = resample(f(Grid2D(32, 32)), Grid2D(16, 16))
        assert np.max(np.abs(down.values - f(Grid2D(16, 16)).values)) <= 1e-10

    def test_round_trip_any_function(self):
        rng = np.random.default_rng(2)
        f = grid_fn(16, rng.standard_normal((16, 16, 1)))
        back = resample(resample(f, Grid2D(32, 32)), Grid2D(16, 16))
        assert np.max(np.abs(back.values - f.values)) <= 1e-10

    def test_downsample_matches_direct_dft_oracle(self):
        rng = np.random.default_rng(3)
        v = rng.standard_normal((32, 32))
        ours = resample(grid_fn(32, v[..., None]), Grid2D(16, 16)).values[..., 0]
        oracle = direct_dft_resample(v, 16)
        assert np.max(np.abs(ours - oracle)) <= 1e-10

    def test_upsample_matches_direct_dft_oracle(self):
        rng = np.random.default_rng(4)
        v = rng.standard_normal((8, 8))
        ours = resample(grid_fn(8, v[..., None]), Grid2D(16, 16)).values[..., 0]
        oracle = direct_dft_resample(v, 16)
        assert np.max(np.abs(ours - oracle)) <= 1e-10

    def test_identity_on_same_grid(self):
        rng = np.random.default_rng(5)
        f = grid_fn(8, rng.standard_normal((8, 8, 2)))
        assert np.array_equal(resample(f, Grid2D(8, 8)).values, f.values)

    def test_batch_resample(self):
        rng = np.random.default_rng(6)
        batch = FieldBatch(Grid2D(16, 16), rng.standard_normal((4, 16, 16, 1)))
        up = resample(batch, Grid2D(32, 32))
        assert up.values.shape == (4, 32, 32, 1)
        per = [resample(batch[i], Grid2D(32, 32)).values for i in range(4)]
        assert np.allclose(up.values, per, atol=1e-12)


class TestWrapPhase:
    def test_single_wrap(self):
        f = grid_fn(2, np.full((2, 2, 1), 1.5 * np.pi))
        assert np.allclose(wrap_phase(f).values, -0.5 * np.pi)

    def test_boundary_convention(self):
        f = grid_fn(2, np.array([[np.pi, -np.pi], [0.0, 0.0]])[..., None])
        w = wrap_phase(f)
        assert w.values[0, 0, 0] == np.pi
        assert w.values[0, 1, 0] == np.pi

    def test_value_seven(self):
        f = grid_fn(2, np.full((2, 2, 1), 7.0))
        assert abs(wrap_phase(f).values[0, 0, 0] - 0.7168146928204138) < 1e-12

    def test_idempotent_bitwise(self):
        rng = np.random.default_rng(7)
        f = grid_fn(16, rng.uniform(-20, 20, size=(16, 16, 1)))
        once = wrap_phase(f)
        twice = wrap_phase(once)
        assert np.array_equal(once.values, twice.values)

    def test_returns_angular_field(self):
        f = grid_fn(4, np.random.default_rng(8).uniform(-9, 9, (4, 4, 1)))
        w = wrap_phase(f)
        assert isinstance(w, AngularField)
        assert np.all(w.values > -np.pi) and np.all(w.values <= np.pi)

    def test_rejects_multichannel(self):
        f = grid_fn(4, np.zeros((4, 4, 2)))
        with pytest.raises(InvalidInputError):
            wrap_phase(f)


class TestAngularField:
    def test_validates_range(self):
        with pytest.raises(InvalidInputError):
            AngularField(Grid2D(2, 2), np.full((2, 2, 1), 4.0))
        AngularField(Grid2D(2, 2), np.full((2, 2, 1), np.pi))
