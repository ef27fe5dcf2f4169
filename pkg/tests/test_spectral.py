"""
Tests for the Fourier representation layer.

Validates:
- Grid construction and the dealias cutoff
- Forward/inverse transform conventions
- Spectral derivatives and dealiased products
- Sobolev norms, the Bessel shift and truncation
- Random initial data and the snapshot format
"""

import numpy as np
import pytest

from eulerlab.diagnostics import mass_integral
from eulerlab.errors import GridMismatch, InvalidGrid, ShapeMismatch
from eulerlab.spectral import (
    ScalarField,
    State,
    bessel_shift,
    dealiased_product,
    inner_product,
    make_grid,
    mean_project,
    random_state,
    read_snapshot,
    retained_modes,
    sobolev_norm,
    spectral_derivative,
    to_physical,
    to_spectral,
    truncate,
    write_snapshot,
)
from eulerlab.spectral.fields import reflect
from eulerlab.spectral.norms import l2_physical


class TestGrid:
    """Grid validation and derived arrays."""

    @pytest.mark.parametrize("dim,N,cutoff", [(1, 8, 2), (2, 32, 10), (3, 16, 5), (1, 64, 21)])
    def test_cutoff_strictly_below_two_thirds(self, dim, N, cutoff):
        """3 * cutoff < N so quadratic products need no padding."""
        grid = make_grid(dim, N)
        assert grid.cutoff == cutoff
        assert 3 * grid.cutoff < N

    @pytest.mark.parametrize("dim,N", [(2, 31), (2, 6), (4, 16), (0, 16)])
    def test_invalid_grids(self, dim, N):
        with pytest.raises(InvalidGrid):
            make_grid(dim, N)

    def test_retained_modes_lexicographic(self):
        grid = make_grid(2, 16)
        modes = retained_modes(grid, 1)
        assert modes.shape == (9, 2)
        assert modes[0].tolist() == [-1, -1]
        assert modes[4].tolist() == [0, 0]
        assert modes[-1].tolist() == [1, 1]

    def test_grid_is_hashable_and_comparable(self):
        assert make_grid(2, 16) == make_grid(2, 16)
        assert len({make_grid(2, 16), make_grid(2, 16), make_grid(2, 32)}) == 2


class TestTransforms:
    """Coefficient convention f(x) = sum coeff(xi) exp(2 pi i x.xi)."""

    def test_cosine_coefficients(self):
        grid = make_grid(1, 16)
        x = grid.points[0]
        field = ScalarField.from_samples(grid, np.cos(2 * np.pi * x))
        assert field.mode((1,)) == pytest.approx(0.5, abs=1e-15)
        assert field.mode((-1,)) == pytest.approx(0.5, abs=1e-15)
        assert field.mean == pytest.approx(0.0, abs=1e-15)

    def test_samples_recover_input(self):
        grid = make_grid(2, 16)
        rng = np.random.default_rng(0)
        samples = rng.standard_normal(grid.shape)
        field = ScalarField.from_samples(grid, samples)
        np.testing.assert_allclose(field.samples(), samples, atol=1e-13)

    def test_wrong_sample_count(self):
        grid = make_grid(2, 16)
        with pytest.raises(ShapeMismatch):
            ScalarField.from_samples(grid, np.zeros(100))

    def test_single_mode_is_real(self):
        grid = make_grid(2, 16)
        field = ScalarField.single_mode(grid, (1, 2), 0.25 + 0.5j)
        np.testing.assert_allclose(field.coeffs, reflect(grid, field.coeffs), atol=0)
        assert field.mode((-1, -2)) == pytest.approx(0.25 - 0.5j)

    def test_mean_project(self):
        grid = make_grid(1, 16)
        field = ScalarField.single_mode(grid, (1,), 0.5) + 2.0
        mean, rest = mean_project(field)
        assert mean == pytest.approx(2.0)
        assert rest.mean == 0.0
        assert rest.mode((1,)) == pytest.approx(0.5)

    def test_grid_mismatch(self):
        a = ScalarField.zeros(make_grid(1, 16))
        b = ScalarField.zeros(make_grid(1, 32))
        with pytest.raises(GridMismatch):
            a + b


class TestCalculus:
    """Derivatives, products and multipliers."""

    def test_derivative_of_sine(self):
        grid = make_grid(1, 16)
        x = grid.points[0]
        field = ScalarField.from_samples(grid, np.sin(4 * np.pi * x))
        derivative = spectral_derivative(field, 0).samples()
        np.testing.assert_allclose(derivative, 4 * np.pi * np.cos(4 * np.pi * x), atol=1e-12)

    def test_derivative_bad_axis(self):
        with pytest.raises(ValueError):
            spectral_derivative(ScalarField.zeros(make_grid(1, 16)), 1)

    def test_product_inside_band(self):
        """cos^2 = 1/2 + cos(2 . 2 pi x)/2."""
        grid = make_grid(1, 16)
        f = ScalarField.single_mode(grid, (1,), 0.5)
        product = dealiased_product(f, f)
        assert product.mean == pytest.approx(0.5, abs=1e-15)
        assert product.mode((2,)) == pytest.approx(0.25, abs=1e-15)

    def test_product_drops_modes_past_cutoff(self):
        grid = make_grid(1, 16)
        f = ScalarField.single_mode(grid, (4,), 0.5)
        product = dealiased_product(f, f)
        assert product.mean == pytest.approx(0.5, abs=1e-15)
        assert np.max(np.abs(product.coeffs[1:])) < 1e-15

    def test_product_independent_of_resolution(self):
        """Band-limited inputs give the same retained product on N=32 and on N=64."""
        coarse, fine = make_grid(2, 32), make_grid(2, 64)
        f = random_state(3, coarse, 1.0, 1.0).sigma
        g = random_state(4, coarse, 1.0, 1.0).velocity[0]
        index = tuple(m % fine.N for m in coarse.modes)

        def embed(field):
            coeffs = np.zeros(fine.shape, dtype=np.complex128)
            coeffs[index] = field.coeffs
            return ScalarField(fine, coeffs)

        on_coarse = dealiased_product(f, g)
        on_fine = dealiased_product(embed(f), embed(g))
        restricted = np.where(coarse.dealias_mask, on_fine.coeffs[index], 0.0)
        np.testing.assert_allclose(on_coarse.coeffs, restricted, rtol=0, atol=1e-12)

    def test_bessel_shift_inverse(self, small_state):
        back = bessel_shift(bessel_shift(small_state, "S"), "S_inv")
        np.testing.assert_allclose(back.data, small_state.data, atol=1e-16)

    def test_bessel_shift_direction(self, small_state):
        with pytest.raises(ValueError):
            bessel_shift(small_state, "T")

    def test_truncate(self, small_state):
        kept = truncate(small_state, 2)
        mask = small_state.grid.box_mask(2)
        assert np.all(kept.data[:, ~mask] == 0)
        np.testing.assert_array_equal(kept.data[:, mask], small_state.data[:, mask])


class TestNorms:
    """Sobolev weights and state combinations."""

    def test_single_mode_norms(self):
        grid = make_grid(2, 16)
        f = ScalarField.single_mode(grid, (1, 0), 0.5)
        assert sobolev_norm(f, 0) == pytest.approx(np.sqrt(0.5))
        assert sobolev_norm(f, 1) == pytest.approx(np.sqrt(0.5 * (1 + 4 * np.pi ** 2)))
        assert sobolev_norm(f, 1, weight="paper") == pytest.approx(1.0)

    def test_parseval(self):
        """The unweighted norm of the coefficients equals the L2 norm of the samples."""
        grid = make_grid(2, 16)
        samples = np.random.default_rng(1).standard_normal(grid.shape)
        field = to_spectral(grid, samples)
        np.testing.assert_allclose(to_physical(field), samples, atol=1e-13)
        assert sobolev_norm(field, 0) == pytest.approx(l2_physical(samples), rel=1e-12)

    def test_state_combinations(self):
        grid = make_grid(2, 16)
        f = ScalarField.single_mode(grid, (1, 0), 0.5)
        state = State.from_fields(f, [f, ScalarField.zeros(grid)])
        assert sobolev_norm(state, 0) == pytest.approx(2 * np.sqrt(0.5))
        assert sobolev_norm(state, 0, combine="l2") == pytest.approx(1.0)

    def test_inner_product_matches_norm(self, small_state):
        assert inner_product(small_state, small_state, 2) == pytest.approx(
            sobolev_norm(small_state, 2, combine="l2") ** 2
        )

    def test_unknown_weight(self, small_state):
        with pytest.raises(ValueError):
            sobolev_norm(small_state, 2, weight="other")


class TestRandomState:
    """Seeded initial data."""

    def test_reproducible(self, grid2):
        a = random_state(3, grid2, 2.0, 0.1)
        b = random_state(3, grid2, 2.0, 0.1)
        np.testing.assert_array_equal(a.data, b.data)

    def test_hermitian_masked_and_normalized(self, grid2):
        state = random_state(3, grid2, 2.0, 0.1)
        np.testing.assert_allclose(state.data, reflect(grid2, state.data), atol=1e-18)
        assert np.all(state.data[:, ~grid2.dealias_mask] == 0)
        assert state.sigma.mean == 0.0
        assert sobolev_norm(state, 2.0) == pytest.approx(0.1, rel=1e-12)

    def test_unit_mass(self, grid2, params):
        state = random_state(5, grid2, 3.0, 0.05, sigma_mean="unit_mass", theta=params.theta)
        assert mass_integral(state, params) == pytest.approx(1.0, abs=1e-13)

    def test_rejects_bad_arguments(self, grid2):
        with pytest.raises(ValueError):
            random_state(0, grid2, 2.0, 0.0)
        with pytest.raises(ValueError):
            random_state(0, grid2, 2.0, 1.0, sigma_mean="half")


class TestSnapshot:
    """Text snapshot format."""

    def test_header_and_exact_values(self, tmp_path, small_state):
        path = tmp_path / "sigma.txt"
        write_snapshot(str(path), small_state.sigma, "sigma", 0.5)
        assert path.read_text().splitlines()[0] == "# dim=2 N=16 field=sigma t=0.5"
        field, name, t = read_snapshot(str(path))
        assert name == "sigma"
        assert t == 0.5
        np.testing.assert_array_equal(field.coeffs, small_state.sigma.coeffs)
