"""
Tests for time stepping.

Validates:
- Lawson-RK4 is exact on the linear part and fourth order overall
- evolve: steady states, small-data linear behaviour, blow-up detection, recording
- Trajectory interpolation and persistence
- Frozen-coefficient evolution and Picard contraction
"""

import numpy as np
import pytest

from eulerlab.errors import BlowUp, GridMismatch, NonPhysicalDensity, TimeOutOfRange
from eulerlab.integrator import (
    LawsonPropagators,
    NormRecorder,
    Trajectory,
    autonomous_nonlinearity,
    constant_guess,
    evolve,
    frozen_evolve,
    lawson_rk4_step,
    picard_iterate,
    picard_sequence,
    step_count,
    z_norm,
)
from eulerlab.linear import apply_semigroup
from eulerlab.spectral import ScalarField, State, make_grid, random_state, sobolev_norm


def _relative(a: State, b: State) -> float:
    return sobolev_norm(a - b, 2.0) / sobolev_norm(b, 2.0)


class TestLawsonStep:
    """Single Lawson-RK4 steps."""

    def test_linear_step_is_exact(self, small_state):
        propagators = LawsonPropagators.build(small_state.grid, 0.05)
        out = lawson_rk4_step(small_state, 0.05, propagators)
        np.testing.assert_allclose(out.data, apply_semigroup(small_state, 0.05).data, atol=1e-16)

    def test_zero_step_copies(self, small_state, params):
        propagators = LawsonPropagators.build(small_state.grid, 0.05)
        out = lawson_rk4_step(small_state, 0.0, propagators, autonomous_nonlinearity(params))
        np.testing.assert_array_equal(out.data, small_state.data)

    def test_grid_mismatch(self, small_state):
        propagators = LawsonPropagators.build(make_grid(2, 32), 0.05)
        with pytest.raises(GridMismatch):
            lawson_rk4_step(small_state, 0.05, propagators)

    def test_step_mismatch(self, small_state):
        propagators = LawsonPropagators.build(small_state.grid, 0.05)
        with pytest.raises(ValueError):
            lawson_rk4_step(small_state, 0.1, propagators)

    def test_fourth_order(self, grid2, params):
        initial = random_state(3, grid2, 3.0, 0.5, sigma_mean="unit_mass", theta=params.theta)
        reference = evolve(initial, 0.5, 0.00125, params).states[-1]
        errors = [sobolev_norm(evolve(initial, 0.5, dt, params).states[-1] - reference, 2.0) for dt in (0.01, 0.005)]
        order = np.log(errors[0] / errors[1]) / np.log(2.0)
        assert order >= 3.5


class TestEvolve:
    """Full nonlinear runs."""

    def test_step_count(self):
        assert step_count(1.0, 0.01) == 100
        with pytest.raises(ValueError):
            step_count(1.0, 0.3)
        with pytest.raises(ValueError):
            step_count(1.0, 0.0)

    def test_linear_run_matches_semigroup(self, small_state, params):
        trajectory = evolve(small_state, 1.0, 0.1, params, nonlinear=False)
        assert _relative(trajectory.states[-1], apply_semigroup(small_state, 1.0)) < 1e-13

    def test_rest_state_is_steady(self, grid2, params):
        zero = ScalarField.zeros(grid2)
        rest = State.from_fields(ScalarField.constant(grid2, 0.3), [zero, zero])
        trajectory = evolve(rest, 0.5, 0.05, params)
        np.testing.assert_array_equal(trajectory.states[-1].data, rest.data)

    def test_small_data_follows_linear_flow(self, grid2, params):
        initial = random_state(4, grid2, 3.0, 1e-6, theta=params.theta)
        trajectory = evolve(initial, 1.0, 0.01, params)
        assert _relative(trajectory.states[-1], apply_semigroup(initial, 1.0)) < 1e-4

    def test_ceiling_raises(self, small_state, params):
        with pytest.raises(BlowUp):
            evolve(small_state, 1.0, 0.01, params, ceiling=0.5 * sobolev_norm(small_state, 2.0))

    def test_large_data_breaks_down(self, grid2, params):
        initial = random_state(5, grid2, 3.0, 100.0, theta=params.theta)
        with pytest.raises((BlowUp, NonPhysicalDensity)):
            evolve(initial, 5.0, 0.1, params)

    def test_record_every(self, small_state, params):
        trajectory = evolve(small_state, 1.0, 0.01, params, record_every=10)
        assert len(trajectory) == 11
        assert trajectory.dt == pytest.approx(0.1)
        assert trajectory.step_dt == pytest.approx(0.01)
        np.testing.assert_allclose(trajectory.times, np.arange(11) * 0.1, atol=1e-12)

    def test_observer_sees_every_step(self, small_state, params):
        recorder = NormRecorder(2.0)
        evolve(small_state, 0.5, 0.05, params, observers=[recorder], record_every=5)
        assert len(recorder.times) == 11
        assert all(b > a for a, b in zip(recorder.norms_s, recorder.norms_s1))

    def test_deterministic(self, small_state, params):
        first = evolve(small_state, 0.5, 0.01, params)
        second = evolve(small_state, 0.5, 0.01, params)
        np.testing.assert_array_equal(first.states[-1].data, second.states[-1].data)


class TestTrajectory:
    """Interpolation, windows and persistence."""

    @pytest.fixture
    def trajectory(self, small_state, params):
        return evolve(small_state, 0.5, 0.05, params)

    def test_state_at_nodes_and_midpoints(self, trajectory):
        np.testing.assert_array_equal(trajectory.state_at(0.1).data, trajectory.states[2].data)
        midpoint = 0.5 * (trajectory.states[2] + trajectory.states[3])
        np.testing.assert_allclose(trajectory.state_at(0.125).data, midpoint.data, atol=1e-16)

    def test_state_at_out_of_range(self, trajectory):
        with pytest.raises(TimeOutOfRange):
            trajectory.state_at(0.6)
        with pytest.raises(TimeOutOfRange):
            trajectory.state_at(-0.1)

    def test_window(self, trajectory):
        window = trajectory.window(0.2)
        assert len(window) == 5
        assert window.T_end == pytest.approx(0.2)
        with pytest.raises(TimeOutOfRange):
            trajectory.window(1.0)

    def test_save_and_load(self, trajectory, tmp_path):
        trajectory.save(str(tmp_path / "traj"), seed=7)
        loaded = Trajectory.load(str(tmp_path / "traj"))
        assert len(loaded) == len(trajectory)
        assert loaded.meta["seed"] == 7
        assert loaded.params.gamma == trajectory.params.gamma
        np.testing.assert_allclose(loaded.times, trajectory.times)
        for a, b in zip(loaded.states, trajectory.states):
            np.testing.assert_array_equal(a.data, b.data)


class TestFrozenEvolution:
    """M_v(t, t0) for a given coefficient path."""

    @pytest.fixture
    def path(self, small_state, params):
        return evolve(small_state, 1.0, 0.01, params)

    def test_zero_path_is_semigroup(self, small_state, params):
        zero_path = constant_guess(State.zeros(small_state.grid), 1.0, 0.1, params)
        out = frozen_evolve(zero_path, small_state, 0.0, 1.0)
        np.testing.assert_allclose(out.data, apply_semigroup(small_state, 1.0).data, atol=1e-15)

    def test_solution_solves_its_own_frozen_problem(self, path, small_state):
        out = frozen_evolve(path, small_state, 0.0, 1.0)
        assert _relative(out, path.states[-1]) < 1e-3

    def test_composition(self, path, small_state):
        direct = frozen_evolve(path, small_state, 0.0, 1.0)
        halfway = frozen_evolve(path, small_state, 0.0, 0.5)
        composed = frozen_evolve(path, halfway, 0.5, 1.0)
        assert _relative(composed, direct) < 1e-12

    def test_growth_rate_bound_across_amplitudes(self, grid2, params):
        """log(|M(1,0)y|_2 / |y|_2) <= 1 + c * amplitude, with c fitted over two decades."""
        amplitudes = np.array([1e-3, 1e-2, 1e-1])
        argument = random_state(21, grid2, 2.0, 1.0, theta=params.theta)
        base = sobolev_norm(argument, 2.0)
        rates = []
        for amplitude in amplitudes:
            path = evolve(random_state(5, grid2, 3.0, float(amplitude), theta=params.theta), 1.0, 0.01, params)
            rates.append(np.log(sobolev_norm(frozen_evolve(path, argument, 0.0, 1.0), 2.0) / base))
        rates = np.array(rates)

        slope, intercept = np.polyfit(amplitudes, rates, 1)
        assert intercept < 1.0
        assert np.all(rates <= 1.0 + max(slope, 0.0) * amplitudes)
        linear = np.log(sobolev_norm(apply_semigroup(argument, 1.0), 2.0) / base)
        assert abs(rates[0] - linear) < 1e-2

    def test_empty_interval(self, path, small_state):
        out = frozen_evolve(path, small_state, 0.3, 0.3)
        np.testing.assert_array_equal(out.data, small_state.data)

    def test_outside_path(self, path, small_state):
        with pytest.raises(TimeOutOfRange):
            frozen_evolve(path, small_state, 0.0, 1.5)


class TestPicard:
    """Picard iteration g -> M_g(., 0) v0."""

    def test_solution_is_nearly_fixed(self, small_state, params):
        path = evolve(small_state, 0.5, 0.01, params)
        outcome = picard_iterate(path, small_state, 0.5, iterations=1)
        assert z_norm(outcome.trajectory, path) < 1e-3 * max(path.norms(2.0))

    def test_contracts_for_small_data(self, grid2, params):
        initial = random_state(9, grid2, 3.0, 1e-3, theta=params.theta)
        outcome = picard_sequence(initial, 0.5, 0.01, params, iterations=4)
        assert len(outcome.factors) == 3
        assert len(outcome.higher_norm_peaks) == 4
        assert all(f < 1.0 for f in outcome.factors)
        assert outcome.contraction_factor == outcome.factors[-1]

    def test_factor_grows_with_amplitude(self, grid2, params):
        factors = []
        for amplitude in (1e-3, 1e-1):
            initial = random_state(9, grid2, 3.0, amplitude, theta=params.theta)
            factors.append(picard_sequence(initial, 0.5, 0.01, params, iterations=3).contraction_factor)
        assert factors[0] < factors[1]

    def test_single_iterate_has_no_factor(self, small_state, params):
        outcome = picard_sequence(small_state, 0.2, 0.02, params, iterations=1)
        assert np.isnan(outcome.contraction_factor)

    def test_needs_an_iteration(self, small_state, params):
        with pytest.raises(ValueError):
            picard_sequence(small_state, 0.2, 0.02, params, iterations=0)
