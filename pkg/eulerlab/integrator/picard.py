"""
Picard iteration g -> F(g), F(g)(t) = M_g(t, 0) initial, with the sup-in-time
s-norm as the contraction metric.
"""

from typing import List, NamedTuple, Optional

import numpy as np
from loguru import logger

from ..dynamics.gas import GasParameters
from ..errors import TimeOutOfRange
from ..spectral.fields import State
from ..spectral.norms import sobolev_norm
from .evolution import frozen_path, step_count
from .trajectory import TIME_TOLERANCE, Trajectory


class PicardOutcome(NamedTuple):
    trajectory: Trajectory
    contraction_factor: float
    factors: List[float]
    higher_norm_peaks: List[float]
    iterates: List[Trajectory]


def z_norm(first: Trajectory, second: Trajectory, s: float = 2.0) -> float:
    """sup_t ||first(t) - second(t)||_s over a shared lattice."""
    if len(first) != len(second):
        raise ValueError(f"trajectories hold {len(first)} and {len(second)} states")
    return max(sobolev_norm(a - b, s) for a, b in zip(first.states, second.states))


def constant_guess(initial: State, T_window: float, dt: float, params: GasParameters) -> Trajectory:
    """The path t -> initial on [0, T_window]."""
    count = step_count(T_window, dt)
    return Trajectory(initial.grid, params, dt, np.arange(count + 1) * dt, [initial] * (count + 1), step_dt=dt)


def picard_map(guess: Trajectory, initial: State, T_window: float, params: Optional[GasParameters] = None) -> Trajectory:
    """F(guess) on guess's lattice restricted to [0, T_window]."""
    if guess.T_end < T_window - TIME_TOLERANCE:
        raise TimeOutOfRange(f"guess ends at {guess.T_end}, window is {T_window}")
    params = params or guess.params
    window = guess.window(T_window)
    stride = max(1, int(round(window.dt / window.step_dt)))
    steps = (len(window) - 1) * stride
    if steps == 0:
        return Trajectory(window.grid, params, window.dt, window.times, [initial], step_dt=window.step_dt)
    states = frozen_path(window, initial, 0.0, window.T_end, params, steps=steps)[::stride]
    return Trajectory(window.grid, params, window.dt, window.times, states, step_dt=window.step_dt)


def picard_iterate(
    guess: Trajectory,
    initial: State,
    T_window: float,
    params: Optional[GasParameters] = None,
    iterations: int = 3,
    s: float = 2.0,
) -> PicardOutcome:
    """
    Apply F repeatedly starting from guess.

    The contraction factor of the last pair is
    ||g_{k+1} - g_k||_Z / ||g_k - g_{k-1}||_Z with g_0 = guess; it is nan
    when fewer than two applications were made.

    Returns:
        PicardOutcome with the last iterate, the last factor, every factor,
        and the peak (s+1)-norm of each iterate
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    params = params or guess.params
    iterates = [guess.window(T_window)]
    for k in range(iterations):
        iterates.append(picard_map(iterates[-1], initial, T_window, params))
        logger.debug(f"Picard iterate {k + 1}/{iterations} done")

    differences = [z_norm(b, a, s) for a, b in zip(iterates[:-1], iterates[1:])]
    factors = []
    for previous, current in zip(differences[:-1], differences[1:]):
        factors.append(current / previous if previous > 0 else 0.0)
    peaks = [float(max(state_norms)) for state_norms in (it.norms(s + 1) for it in iterates[1:])]
    factor = factors[-1] if factors else float("nan")
    logger.info(f"Picard over [0, {T_window}]: factors=[{', '.join(f'{f:.3e}' for f in factors)}]")
    return PicardOutcome(iterates[-1], factor, factors, peaks, iterates)


def picard_sequence(
    initial: State,
    T_window: float,
    dt: float,
    params: GasParameters,
    iterations: int = 4,
    s: float = 2.0,
) -> PicardOutcome:
    """Picard iteration started from the constant path."""
    return picard_iterate(constant_guess(initial, T_window, dt, params), initial, T_window, params, iterations, s)
