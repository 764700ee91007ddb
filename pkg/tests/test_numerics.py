"""Special functions and grid machinery against scipy and closed forms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import SI_AT_1, SI_AT_PI, gaussian_2d
from scipy import special

from spdc_coherence.errors import (
    GridTooCoarse,
    NegativeArgument,
    NonPositiveParameter,
    NoSignChange,
    ZeroMass,
)
from spdc_coherence.numerics import (
    Grid2D,
    RadialGrid,
    bessel_j0,
    find_root,
    grid_moments,
    hankel0,
    sine_integral,
    sinc,
)


class TestSinc:
    def test_matches_numpy(self):
        x = np.linspace(-40.0, 40.0, 1601)
        assert np.max(np.abs(sinc(x) - np.sinc(x / math.pi))) < 1e-15

    def test_removable_singularity(self):
        assert sinc(0.0) == 1.0
        # both sides of the series/ratio handoff agree with numpy
        for x in (0.999e-4, 1.001e-4):
            assert abs(sinc(x) - np.sinc(x / math.pi)) < 1e-14

    def test_scalar_in_scalar_out(self):
        out = sinc(1.3)
        assert isinstance(out, float)

    @given(st.floats(min_value=-1e3, max_value=1e3, allow_nan=False))
    def test_even_and_bounded(self, x):
        assert sinc(x) == sinc(-x)
        assert abs(sinc(x)) <= 1.0


class TestSineIntegral:
    def test_against_scipy(self):
        xs = np.concatenate(
            [np.linspace(0.0, 3.9, 40), np.linspace(3.9, 4.1, 41), np.geomspace(4.1, 500.0, 60)]
        )
        worst = max(abs(sine_integral(float(x)) - special.sici(x)[0]) for x in xs)
        assert worst < 1e-10  # observed ~9e-16

    def test_frozen_values(self):
        assert sine_integral(0.0) == 0.0
        assert abs(sine_integral(1.0) - SI_AT_1) < 1e-13
        assert abs(sine_integral(math.pi) - SI_AT_PI) < 1e-13

    def test_split_point_continuity(self):
        # power series below 4, continued fraction above
        assert abs(sine_integral(4.0 - 1e-9) - sine_integral(4.0 + 1e-9)) < 1e-8

    def test_array_shape(self):
        xs = np.array([[0.5, 1.0], [2.0, 10.0]])
        out = sine_integral(xs)
        assert out.shape == xs.shape
        assert abs(out[0, 1] - SI_AT_1) < 1e-13

    def test_negative_rejected(self):
        with pytest.raises(NegativeArgument):
            sine_integral(-0.1)

    def test_limit(self):
        assert abs(sine_integral(1e4) - math.pi / 2.0) < 2e-4


class TestBesselJ0:
    def test_against_scipy(self):
        xs = np.linspace(0.0, 120.0, 4801)
        assert np.max(np.abs(bessel_j0(xs) - special.j0(xs))) < 1e-8  # observed ~5e-12

    def test_split_point(self):
        for x in (11.999999, 12.000001):
            assert abs(bessel_j0(x) - special.j0(x)) < 1e-9

    def test_even(self):
        assert bessel_j0(-7.3) == bessel_j0(7.3)

    def test_scalar(self):
        assert bessel_j0(0.0) == 1.0
        assert isinstance(bessel_j0(2.0), float)


class TestFindRoot:
    def test_cosine_root(self):
        assert abs(find_root(math.cos, 1.0, 2.0, tol=1e-13) - math.pi / 2.0) < 1e-12

    def test_endpoint_zero_returned_exactly(self):
        assert find_root(lambda x: x - 1.0, 1.0, 3.0) == 1.0
        assert find_root(lambda x: x - 3.0, 1.0, 3.0) == 3.0

    def test_no_sign_change(self):
        with pytest.raises(NoSignChange):
            find_root(lambda x: x * x + 1.0, -1.0, 1.0)

    def test_bad_bracket(self):
        with pytest.raises(ValueError):
            find_root(math.cos, 2.0, 1.0)

    def test_deterministic(self):
        a = find_root(lambda x: x**3 - 2.0, 0.0, 2.0, tol=1e-14)
        b = find_root(lambda x: x**3 - 2.0, 0.0, 2.0, tol=1e-14)
        assert a == b
        assert abs(a - 2.0 ** (1.0 / 3.0)) < 1e-13

    @given(st.floats(min_value=-5.0, max_value=5.0, allow_nan=False))
    @settings(max_examples=50)
    def test_recovers_linear_root(self, r):
        got = find_root(lambda x: x - r, -6.0, 6.0, tol=1e-12)
        assert abs(got - r) < 1e-11


class TestRadialGrid:
    def test_midpoint_layout(self):
        g = RadialGrid.from_function(lambda r: r, 2.0, 32)
        assert g.n == 32
        assert g.step == 2.0 / 32
        assert g.nodes[0] == pytest.approx(g.step / 2.0)
        assert np.allclose(np.diff(g.nodes), g.step)
        assert np.array_equal(g.values, g.nodes)

    def test_too_few_samples(self):
        with pytest.raises(GridTooCoarse):
            RadialGrid(1.0, np.ones(15))

    def test_bad_r_max(self):
        with pytest.raises(NonPositiveParameter):
            RadialGrid(0.0, np.ones(32))
        with pytest.raises(NonPositiveParameter):
            RadialGrid.from_function(lambda r: r, -1.0, 32)


class TestHankel0:
    def test_gaussian_self_transform(self):
        # f(q) = exp(-q^2)  ->  exp(-rho^2/4) / (4 pi)
        g = RadialGrid.from_function(lambda q: np.exp(-q * q), 25.0, 4096)
        for rho in (0.0, 0.5, 1.3, 2.7, 4.0):
            want = math.exp(-rho * rho / 4.0) / (4.0 * math.pi)
            assert abs(hankel0(g, rho) - want) < 1e-6  # observed ~2.5e-7

    def test_negative_rho(self):
        g = RadialGrid.from_function(lambda q: np.exp(-q * q), 10.0, 64)
        with pytest.raises(NegativeArgument):
            hankel0(g, -0.5)

    def test_oscillation_guard(self):
        g = RadialGrid.from_function(lambda q: np.exp(-q * q), 30.0, 64)
        with pytest.raises(GridTooCoarse) as exc_info:
            hankel0(g, 10.0)
        needed = exc_info.value.suggested_count
        assert needed is not None and needed > 64
        finer = RadialGrid.from_function(lambda q: np.exp(-q * q), 30.0, int(needed))
        hankel0(finer, 10.0)  # must not raise


class TestGrid2D:
    def test_validation(self):
        with pytest.raises(GridTooCoarse):
            Grid2D((0.0, 1.0, 4), (0.0, 1.0, 8), np.ones((4, 8)))
        with pytest.raises(ValueError):
            Grid2D((1.0, 0.0, 8), (0.0, 1.0, 8), np.ones((8, 8)))
        with pytest.raises(ValueError):
            Grid2D((0.0, 1.0, 8), (0.0, 1.0, 8), np.ones((8, 9)))
        with pytest.raises(ValueError):
            Grid2D((0.0, 1.0, 8), (0.0, 1.0, 8), -np.ones((8, 8)))
        bad = np.ones((8, 8))
        bad[3, 3] = np.nan
        with pytest.raises(ValueError):
            Grid2D((0.0, 1.0, 8), (0.0, 1.0, 8), bad)

    def test_centers_and_area(self):
        g = Grid2D((-1.0, 1.0, 8), (0.0, 4.0, 16), np.ones((8, 16)))
        assert g.centers1[0] == pytest.approx(-1.0 + 0.125)
        assert g.centers2[-1] == pytest.approx(4.0 - 0.125)
        assert g.cell_area == pytest.approx(0.25 * 0.25)


def _gaussian_grid(var1, var2, covar, half=8.0, n=256):
    x = np.linspace(-half, half, n + 1)[:-1] + half / n
    vals = gaussian_2d(x[:, None], x[None, :], var1, var2, covar)
    return Grid2D((-half, half, n), (-half, half, n), vals)


class TestGridMoments:
    def test_separable_gaussian(self):
        m = grid_moments(_gaussian_grid(1.5, 0.6, 0.0))
        assert abs(m.mean1) < 1e-12 and abs(m.mean2) < 1e-12
        assert m.var1 == pytest.approx(1.5, rel=1e-4)
        assert m.var2 == pytest.approx(0.6, rel=1e-4)
        assert abs(m.covar) < 1e-6

    def test_correlated_gaussian(self):
        m = grid_moments(_gaussian_grid(1.0, 1.0, 0.7))
        assert m.covar == pytest.approx(0.7, rel=1e-3)
        assert m.var1 == pytest.approx(1.0, rel=1e-3)

    def test_normalization_free(self):
        g = _gaussian_grid(1.0, 1.0, 0.0)
        scaled = Grid2D(g.axis1, g.axis2, g.values * 7.5)
        for a, b in zip(grid_moments(scaled), grid_moments(g)):
            assert abs(a - b) < 1e-12  # scaling only reshuffles rounding

    def test_zero_mass(self):
        g = Grid2D((0.0, 1.0, 8), (0.0, 1.0, 8), np.zeros((8, 8)))
        with pytest.raises(ZeroMass):
            grid_moments(g)
