"""
Tests for the moving-frame functionals and the decomposition.

Validates:
- The assembled frame system on a hand-checkable case
- Linear scaling of the functionals with the state and convergence in the box size
- Decomposition identities (lift, inverse lift, reconstruction)
- Invariance residuals and finite-difference checks of the conjugated dynamics
- Singular frame systems
"""

import numpy as np
import pytest

from eulerlab.dynamics import linearized_rhs
from eulerlab.errors import FrameSolveError
from eulerlab.frame import (
    FrameFunctionals,
    assemble_frame_system,
    c_rate,
    conjugated_rhs,
    decompose_state,
    frame_modes,
    frame_rate,
    frame_residual,
    inverse_lift,
    lift,
    solve_frame,
    solve_frames,
)
from eulerlab.frame.functionals import effective_truncation
from eulerlab.integrator import evolve
from eulerlab.spectral import ScalarField, State, make_grid, random_state, sobolev_norm, truncate


def _zero_frame(grid, K):
    m = frame_modes(grid, K).shape[0]
    return FrameFunctionals(grid, K, np.zeros(m, dtype=complex), np.zeros((grid.dim, m), dtype=complex))


def _constant_state(grid, sigma):
    zero = ScalarField.zeros(grid)
    return State.from_fields(ScalarField.constant(grid, sigma), [zero] * grid.dim)


@pytest.fixture
def frame_state(grid1, params):
    return random_state(21, grid1, 3.0, 0.1, sigma_mean="unit_mass", theta=params.theta)


class TestFrameSystem:
    """Assembly and solution of (l1, l2) T = b."""

    def test_zero_state_block(self, params):
        grid = make_grid(1, 8)
        T, b = assemble_frame_system(State.zeros(grid), params, 1)
        assert T.shape == (5, 5)
        two_pi_i = 2j * np.pi
        np.testing.assert_allclose(T[np.ix_([1, 4], [1, 4])], [[0.0, two_pi_i], [two_pi_i, 1.0]], atol=1e-15)
        assert np.max(np.abs(b)) == 0.0

    def test_zero_state_has_zero_frame(self, grid2, params):
        frame = solve_frame(State.zeros(grid2), params, 4)
        assert frame.row_norm() == 0.0

    def test_constant_state_has_zero_frame(self, grid2, params):
        frame = solve_frame(_constant_state(grid2, 0.4), params, 4)
        assert frame.row_norm() == 0.0

    @pytest.mark.parametrize("amplitude", [1e-3, 1e-2, 1e-1])
    def test_linear_in_small_amplitude(self, grid2, params, amplitude):
        """Halving the state halves the frame across two decades of amplitude."""
        norms = []
        for scale in (0.5, 1.0):
            state = random_state(13, grid2, 3.0, scale * amplitude, theta=params.theta)
            norms.append(solve_frame(state, params, 4).row_norm())
        assert norms[1] / norms[0] == pytest.approx(2.0, rel=0.1)

    def test_l1_ignores_constants(self, frame_state, params):
        frame = solve_frame(frame_state, params, 4)
        assert frame.l1[np.flatnonzero(~frame.modes.any(axis=1))[0]] == 0.0
        assert frame.apply_l1(ScalarField.constant(frame_state.grid, 3.0)) == 0.0

    def test_box_refinement(self, frame_state, params):
        coarse = solve_frame(frame_state, params, 4)
        fine = solve_frame(frame_state, params, 8)
        common = np.max(np.abs(fine.modes), axis=1) <= 4
        scale = fine.row_norm()
        assert np.max(np.abs(fine.l1[common] - coarse.l1)) < 1e-3 * scale
        assert np.max(np.abs(fine.l2[:, common] - coarse.l2)) < 1e-3 * scale

    def test_truncation_is_clamped(self, grid2):
        assert effective_truncation(grid2, 50) == grid2.cutoff
        with pytest.raises(ValueError):
            effective_truncation(grid2, 0)

    def test_solve_frames_keeps_order(self, grid2, params):
        states = [random_state(seed, grid2, 3.0, 1e-2, theta=params.theta) for seed in range(3)]
        frames = solve_frames(states, params, 3)
        for state, frame in zip(states, frames):
            np.testing.assert_allclose(frame.l2, solve_frame(state, params, 3).l2, atol=1e-14)

    def test_singular_system(self, grid2, params):
        # 1 + theta*sigma vanishes identically
        with pytest.raises(FrameSolveError):
            solve_frame(_constant_state(grid2, -5.0), params, 3)


class TestDecomposition:
    """(sigma, U) = (c, 0) + lift(sigma_1, U_1)."""

    def test_reconstruction(self, frame_state, params):
        frame = solve_frame(frame_state, params, 6)
        parts = decompose_state(frame_state, frame)
        assert parts.sigma1.mean == 0.0
        np.testing.assert_allclose(parts.reconstruct(frame).data, frame_state.data, atol=1e-15)

    def test_lift_inverts_inverse_lift(self, frame_state, params):
        frame = solve_frame(frame_state, params, 6)
        lowered = inverse_lift(frame, frame_state)
        lifted = lift(frame, lowered.sigma, lowered.velocity)
        np.testing.assert_allclose(lifted.data, frame_state.data, atol=1e-15)

    def test_constant_state_is_all_mean(self, grid2, params):
        state = _constant_state(grid2, 0.4)
        parts = decompose_state(state, solve_frame(state, params, 4))
        assert parts.c == pytest.approx(0.4, abs=1e-15)
        assert parts.part_norm(2.0) == 0.0


class TestInvariance:
    """Residual of the frame condition on lifted probes."""

    def test_zero_state(self, grid2, params):
        state = State.zeros(grid2)
        assert frame_residual(state, solve_frame(state, params, 4), params) < 1e-8

    @pytest.mark.parametrize("seed", range(10))
    def test_state_inside_the_box(self, grid2, params, seed):
        state = truncate(random_state(17 + seed, grid2, 3.0, 0.1, sigma_mean="unit_mass", theta=params.theta), 2)
        assert frame_residual(state, solve_frame(state, params, 2), params) < 1e-8

    def test_residual_shrinks_with_the_box(self, frame_state, params):
        residuals = [frame_residual(frame_state, solve_frame(frame_state, params, K), params) for K in (2, 4, 8)]
        assert residuals[0] > residuals[1] > residuals[2]


class TestFrameDynamics:
    """Conjugated right-hand side and the rate of c."""

    def test_zero_frame_is_plain_linearization(self, frame_state, params):
        frame = _zero_frame(frame_state.grid, 4)
        parts = decompose_state(frame_state, frame)
        out = conjugated_rhs(parts, frame, params)
        expected = linearized_rhs(frame_state, parts.tangent(), params)
        np.testing.assert_allclose(out.data, expected.data, atol=1e-15)

    def test_finite_differences(self, frame_state, params):
        h, K = 1e-3, 8
        sub = evolve(frame_state, 2.0 * h, h, params)
        frames = solve_frames(sub.states, params, K)
        parts = [decompose_state(state, frame) for state, frame in zip(sub.states, frames)]

        tangent_fd = (parts[2].tangent() - parts[0].tangent()) * (0.5 / h)
        predicted = conjugated_rhs(parts[1], frames[1], params)
        assert sobolev_norm(tangent_fd - predicted, 2.0) < 1e-3 * sobolev_norm(predicted, 2.0)

        c_fd = (parts[2].c - parts[0].c) / (2.0 * h)
        c_predicted = c_rate(frame_rate(frames[0], frames[2], 2.0 * h), sub.states[1])
        assert c_fd == pytest.approx(c_predicted, rel=1e-2)

    def test_frame_rate_needs_positive_span(self, frame_state, params):
        frame = solve_frame(frame_state, params, 4)
        with pytest.raises(ValueError):
            frame_rate(frame, frame, 0.0)
