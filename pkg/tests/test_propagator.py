"""
Tests for the exact linear propagator.

Validates:
- Closed-form mode exponentials against scipy's expm
- The unitary triangularization of the mode symbol
- Table application, the semigroup property and decay bounds
- The Helmholtz split of the velocity
"""

import itertools

import numpy as np
import pytest
import scipy.linalg

from eulerlab.errors import GridMismatch, NegativeTime, ZeroMode
from eulerlab.linear import (
    apply_A,
    apply_semigroup,
    mode_eigensystem,
    mode_exponential,
    mode_symbol,
    propagator_table,
    semigroup_constant,
    split_velocity,
    symbol_matrix,
)
from eulerlab.spectral import ScalarField, State, make_grid, mode_index, random_state, sobolev_norm

TIMES = (0.01, 0.1, 1.0, 10.0)


def _modes(dim: int, K: int):
    return [xi for xi in itertools.product(range(-K, K + 1), repeat=dim)]


class TestModeExponential:
    """Closed form of e^{t A(xi)}."""

    @pytest.mark.parametrize("dim", [1, 2, 3])
    def test_matches_expm(self, dim):
        K = {1: 8, 2: 4, 3: 2}[dim]
        worst = 0.0
        for xi in _modes(dim, K):
            for t in TIMES:
                oracle = scipy.linalg.expm(t * symbol_matrix(xi))
                worst = max(worst, np.max(np.abs(mode_exponential(xi, t) - oracle)))
        assert worst < 1e-12

    @pytest.mark.slow
    @pytest.mark.parametrize("dim", [2, 3])
    def test_matches_expm_full_box(self, dim):
        worst = 0.0
        for xi in _modes(dim, 16 if dim == 2 else 8):
            for t in TIMES:
                oracle = scipy.linalg.expm(t * symbol_matrix(xi))
                worst = max(worst, np.max(np.abs(mode_exponential(xi, t) - oracle)))
        assert worst < 1e-12

    def test_zero_mode(self):
        out = mode_exponential((0, 0), 2.0)
        np.testing.assert_allclose(out, np.diag([1.0, np.exp(-2.0), np.exp(-2.0)]), atol=1e-15)

    def test_time_zero_is_identity(self):
        np.testing.assert_allclose(mode_exponential((1, 2, 3), 0.0), np.eye(4), atol=1e-15)

    def test_negative_time(self):
        with pytest.raises(NegativeTime):
            mode_exponential((1,), -0.1)


class TestEigensystem:
    """R(xi)^* A(xi) R(xi) = B(xi) with R unitary."""

    def test_eigenvalues(self):
        symbol = mode_symbol((1, 0))
        omega = np.sqrt(16 * np.pi ** 2 - 1) / 2
        assert symbol.lambda1 == pytest.approx(complex(-0.5, omega))
        assert symbol.lambda2 == pytest.approx(complex(-0.5, -omega))
        assert symbol.shear_multiplicity == 1

    def test_random_modes(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            dim = int(rng.integers(1, 4))
            xi = rng.integers(-16, 17, size=dim)
            if not xi.any():
                xi[0] = 1
            _, R, B = mode_eigensystem(xi)
            np.testing.assert_allclose(R.conj().T @ R, np.eye(dim + 1), atol=1e-12)
            np.testing.assert_allclose(R.conj().T @ symbol_matrix(xi) @ R, B, atol=1e-12)
            assert B[1, 0] == -1.0

    def test_zero_mode_rejected(self):
        with pytest.raises(ZeroMode):
            mode_eigensystem((0, 0))


class TestTables:
    """Grid-wide application of the exponential."""

    def test_single_mode_state(self):
        grid = make_grid(2, 16)
        sigma = ScalarField.single_mode(grid, (1, 2), 0.3)
        zero = ScalarField.zeros(grid)
        state = State.from_fields(sigma, [zero, zero])
        out = apply_semigroup(state, 0.7)
        expected = mode_exponential((1, 2), 0.7) @ np.array([0.3, 0.0, 0.0])
        np.testing.assert_allclose(out.data[(slice(None),) + mode_index(grid, (1, 2))], expected, atol=1e-15)

    def test_semigroup_property(self, small_state):
        once = apply_semigroup(small_state, 0.8)
        twice = apply_semigroup(apply_semigroup(small_state, 0.3), 0.5)
        np.testing.assert_allclose(twice.data, once.data, atol=1e-15)

    def test_zero_time_copy(self, small_state):
        out = apply_semigroup(small_state, 0.0)
        np.testing.assert_array_equal(out.data, small_state.data)
        assert out.data is not small_state.data

    def test_table_grid_mismatch(self, small_state):
        with pytest.raises(GridMismatch):
            propagator_table(make_grid(2, 32), 0.1).apply(small_state)

    def test_apply_A_matches_symbol(self, small_state):
        grid = small_state.grid
        out = apply_A(small_state)
        index = (slice(None),) + mode_index(grid, (2, -1))
        np.testing.assert_allclose(out.data[index], symbol_matrix((2, -1)) @ small_state.data[index], atol=1e-15)

    def test_zero_mean_decay_bound(self, small_state):
        K = semigroup_constant(small_state.grid, 2.0, [0.5, 1.0, 2.0, 4.0])
        assert K >= 1.0
        base = sobolev_norm(small_state, 2.0, combine="l2")
        for t in (0.5, 1.0, 2.0, 4.0):
            norm = sobolev_norm(apply_semigroup(small_state, t), 2.0, combine="l2")
            assert norm <= K * np.exp(-0.5 * t) * base * (1 + 1e-12)

    def test_shear_constant(self):
        grid = make_grid(2, 16)
        assert semigroup_constant(grid, 2.0, [1.0, 2.0], blocks="shear") == pytest.approx(1.0)
        with pytest.raises(ValueError):
            semigroup_constant(grid, 2.0, [1.0], blocks="acoustic")


class TestHelmholtz:
    """Longitudinal / transverse split per mode."""

    def test_split_is_orthogonal_and_complete(self, grid2):
        state = random_state(2, grid2, 2.0, 1.0)
        longitudinal, transverse = split_velocity(state)
        np.testing.assert_allclose(longitudinal + transverse, state.data[1:], atol=1e-15)
        overlap = np.sum(np.conj(longitudinal) * transverse, axis=0)
        assert np.max(np.abs(overlap)) < 1e-14

    def test_pure_shear_decays_at_rate_one(self, grid2):
        state = random_state(2, grid2, 2.0, 1.0)
        _, transverse = split_velocity(state)
        data = np.zeros_like(state.data)
        data[1:] = transverse
        shear = State(grid2, data)
        out = apply_semigroup(shear, 1.5)
        np.testing.assert_allclose(out.data, np.exp(-1.5) * shear.data, atol=1e-14)
