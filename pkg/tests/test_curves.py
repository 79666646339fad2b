import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftsmean import (
    Curve,
    FunctionalSample,
    GridMismatchError,
    fourier_basis,
    inner_product,
    make_grid,
    resample,
    sample_mean,
)
from ftsmean.curves import (
    CurveCsvError,
    max_alias_free_count,
    parse_curves_csv,
    read_curves_csv,
    write_curves_csv,
)


class TestMakeGrid:
    def test_two_points(self):
        g = make_grid(2)
        np.testing.assert_array_equal(g.points, [0.0, 1.0])

    def test_three_points(self):
        np.testing.assert_array_equal(make_grid(3).points, [0.0, 0.5, 1.0])

    def test_spacing_101(self):
        g = make_grid(101)
        assert g.spacing == pytest.approx(0.01, abs=1e-15)
        np.testing.assert_allclose(np.diff(g.points), 0.01, rtol=1e-12)

    @pytest.mark.parametrize("T", [1, 0, -3])
    def test_too_small(self, T):
        with pytest.raises(ValueError):
            make_grid(T)

    def test_rejects_non_unit_interval(self):
        from ftsmean import Grid

        with pytest.raises(ValueError):
            Grid(np.array([0.0, 0.5, 0.9]))
        with pytest.raises(ValueError):
            Grid(np.array([0.0, 0.3, 1.0]))

    def test_weights_sum_to_one(self):
        for T in (2, 7, 100, 513):
            assert make_grid(T).trapezoid_weights.sum() == pytest.approx(1.0, abs=1e-12)


class TestInnerProduct:
    def test_constant_one(self):
        for T in (2, 5, 100):
            g = make_grid(T)
            one = Curve(g, np.ones(T))
            assert inner_product(one, one) == pytest.approx(1.0, abs=1e-12)

    def test_sin_cos_orthogonal(self, grid512):
        t = grid512.points
        f = Curve(grid512, np.sqrt(2) * np.sin(2 * np.pi * t))
        g = Curve(grid512, np.sqrt(2) * np.cos(2 * np.pi * t))
        assert abs(inner_product(f, g)) < 1e-6

    def test_sin_normalized(self, grid512):
        # expected value frozen from quadrature at T=1e5: 1.0000000000000002
        t = grid512.points
        f = Curve(grid512, np.sqrt(2) * np.sin(2 * np.pi * t))
        assert inner_product(f, f) == pytest.approx(1.0, abs=1e-4)

    def test_grid_mismatch(self):
        f = Curve(make_grid(10), np.ones(10))
        g = Curve(make_grid(11), np.ones(11))
        with pytest.raises(GridMismatchError):
            inner_product(f, g)

    @given(st.integers(0, 2**31), st.integers(3, 40))
    @settings(max_examples=40, deadline=None)
    def test_symmetric_and_nonnegative(self, seed, T):
        rng = np.random.default_rng(seed)
        g = make_grid(T)
        f = Curve(g, rng.standard_normal(T))
        h = Curve(g, rng.standard_normal(T))
        assert inner_product(f, h) == pytest.approx(inner_product(h, f), rel=1e-12, abs=1e-15)
        assert inner_product(f, f) >= 0.0

    @given(st.integers(0, 2**31), st.sampled_from([0.5, 1.0, 2.0, -4.0]))
    @settings(max_examples=40, deadline=None)
    def test_bilinear(self, seed, a):
        rng = np.random.default_rng(seed)
        g = make_grid(17)
        f = Curve(g, rng.standard_normal(17))
        h = Curve(g, rng.standard_normal(17))
        u = Curve(g, rng.standard_normal(17))
        lhs = inner_product(Curve(g, a * f.values + h.values), u)
        rhs = a * inner_product(f, u) + inner_product(h, u)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


class TestSampleMean:
    def test_idempotent_on_equal_curves(self, grid100):
        c = np.sin(grid100.points)
        s = FunctionalSample(grid100, np.tile(c, (4, 1)))
        np.testing.assert_array_equal(sample_mean(s).values, c)
        s5 = FunctionalSample(grid100, np.tile(c, (5, 1)))
        np.testing.assert_allclose(sample_mean(s5).values, c, rtol=1e-15)

    def test_cancellation(self, grid100):
        f = np.cos(grid100.points)
        s = FunctionalSample(grid100, np.stack([f, -f]))
        np.testing.assert_array_equal(sample_mean(s).values, np.zeros(grid100.size))

    def test_hand_mean(self):
        g = make_grid(2)
        s = FunctionalSample(g, np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]))
        np.testing.assert_array_equal(sample_mean(s).values, [3.0, 4.0])

    @given(st.integers(0, 2**31), st.sampled_from([2.0, 0.5, -1.0]), st.sampled_from([0.0, 1.0, 0.25]))
    @settings(max_examples=30, deadline=None)
    def test_commutes_with_affine_maps(self, seed, a, b):
        # dyadic scale/shift keep float arithmetic exact
        rng = np.random.default_rng(seed)
        g = make_grid(9)
        vals = rng.integers(-8, 8, size=(4, 9)).astype(float) / 8.0
        s = FunctionalSample(g, vals)
        mapped = FunctionalSample(g, a * vals + b)
        np.testing.assert_array_equal(
            sample_mean(mapped).values, a * sample_mean(s).values + b
        )

    def test_empty_sample_rejected(self, grid100):
        with pytest.raises(ValueError):
            FunctionalSample(grid100, np.empty((0, grid100.size)))


class TestFourierBasis:
    def test_count_one_is_constant(self, grid100):
        b = fourier_basis(grid100, 1)
        assert b.count == 1
        np.testing.assert_array_equal(b.values[0], np.ones(grid100.size))

    def test_count_49(self, grid100):
        assert fourier_basis(grid100, 49).count == 49

    def test_bad_count(self, grid100):
        with pytest.raises(ValueError):
            fourier_basis(grid100, 0)

    def test_gram_identity(self, grid512):
        b = fourier_basis(grid512, 9)
        np.testing.assert_allclose(b.gram_matrix(), np.eye(9), atol=1e-3)

    def test_first_is_exactly_one_rest_integrate_to_zero(self, grid512):
        b = fourier_basis(grid512, 17)
        assert np.all(b.values[0] == 1.0)
        w = grid512.trapezoid_weights
        integrals = b.values[1:] @ w
        assert np.abs(integrals).max() < 1e-6

    def test_ordering(self, grid512):
        t = grid512.points
        b = fourier_basis(grid512, 5)
        np.testing.assert_allclose(b.values[1], np.sqrt(2) * np.sin(2 * np.pi * t))
        np.testing.assert_allclose(b.values[2], np.sqrt(2) * np.cos(2 * np.pi * t))
        np.testing.assert_allclose(b.values[3], np.sqrt(2) * np.sin(4 * np.pi * t))
        np.testing.assert_allclose(b.values[4], np.sqrt(2) * np.cos(4 * np.pi * t))

    def test_alias_free_count(self):
        assert max_alias_free_count(make_grid(100)) == 99
        assert max_alias_free_count(make_grid(50)) == 49
        assert max_alias_free_count(make_grid(8)) == 7

    def test_gram_exact_within_alias_limit_breaks_beyond(self):
        g = make_grid(8)
        ok = fourier_basis(g, max_alias_free_count(g))
        assert np.abs(ok.gram_matrix() - np.eye(ok.count)).max() < 1e-12
        aliased = fourier_basis(g, max_alias_free_count(g) + 2)
        assert np.abs(aliased.gram_matrix() - np.eye(aliased.count)).max() > 0.5


class TestResample:
    def test_identity(self, grid100):
        c = Curve(grid100, np.sin(3 * grid100.points))
        out = resample(c, grid100)
        np.testing.assert_array_equal(out.values, c.values)

    def test_linear_exact(self):
        src = make_grid(11)
        dst = make_grid(37)
        c = Curve(src, 2.0 * src.points - 0.5)
        out = resample(c, dst)
        np.testing.assert_allclose(out.values, 2.0 * dst.points - 0.5, atol=1e-14)

    def test_sine_error_small(self):
        src = make_grid(1001)
        dst = make_grid(100)
        c = Curve(src, np.sin(2 * np.pi * src.points))
        out = resample(c, dst)
        assert np.abs(out.values - np.sin(2 * np.pi * dst.points)).max() < 1e-3

    def test_endpoints_preserved(self):
        src = make_grid(7)
        c = Curve(src, np.array([3.0, 1, 4, 1, 5, 9, 2.0]))
        out = resample(c, make_grid(19))
        assert out.values[0] == 3.0 and out.values[-1] == 2.0


class TestCurveCsv:
    def test_round_trip_plain(self, tmp_path):
        g = make_grid(12)
        s = FunctionalSample(g, np.random.default_rng(3).standard_normal((4, 12)))
        path = tmp_path / "s.csv"
        write_curves_csv(path, s)
        loaded, had_grid = read_curves_csv(path)
        assert not had_grid
        np.testing.assert_array_equal(loaded.values, s.values)
        assert loaded.grid == g

    def test_round_trip_with_grid(self, tmp_path):
        g = make_grid(9)
        s = FunctionalSample(g, np.random.default_rng(4).standard_normal((3, 9)))
        path = tmp_path / "s.csv"
        write_curves_csv(path, s, include_grid=True)
        loaded, had_grid = read_curves_csv(path)
        assert had_grid
        np.testing.assert_array_equal(loaded.values, s.values)

    def test_ragged_row_reports_line(self):
        text = "1.0,2.0,3.0\n1.0,2.0\n"
        with pytest.raises(CurveCsvError) as err:
            parse_curves_csv(text)
        assert err.value.line == 2

    def test_bad_value_reports_line(self):
        text = "1.0,2.0\n1.0,oops\n"
        with pytest.raises(CurveCsvError) as err:
            parse_curves_csv(text)
        assert err.value.line == 2

    def test_empty_input(self):
        with pytest.raises(CurveCsvError):
            parse_curves_csv("\n\n")

    def test_grid_header_width_mismatch(self):
        text = "t:,0.0,0.5,1.0\n1.0,2.0\n"
        with pytest.raises(CurveCsvError):
            parse_curves_csv(text)


class TestImmutability:
    def test_arrays_read_only(self, grid100):
        c = Curve(grid100, np.zeros(grid100.size))
        with pytest.raises(ValueError):
            c.values[0] = 1.0
        with pytest.raises(ValueError):
            grid100.points[0] = 0.5
