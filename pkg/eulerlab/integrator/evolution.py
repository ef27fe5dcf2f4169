"""
Time stepping of the full system and of the frozen-coefficient linear system.
"""

import math
from typing import Callable, List, Optional, Sequence

import numpy as np
from loguru import logger

from ..dynamics.gas import GasParameters, density_from_sigma
from ..dynamics.operators import apply_B
from ..errors import BlowUp, TimeOutOfRange
from ..spectral.fields import State
from ..spectral.norms import sobolev_norm
from .lawson import LawsonPropagators, Nonlinearity, autonomous_nonlinearity, lawson_rk4_step
from .trajectory import TIME_TOLERANCE, Trajectory

Observer = Callable[[float, State], None]

STABILITY_FACTOR = 0.5


class NormRecorder:
    """Observer storing (t, ||.||_s, ||.||_{s+1}) at every step."""

    def __init__(self, s: float, weight: str = "physical", combine: str = "sum"):
        self.s = s
        self.weight = weight
        self.combine = combine
        self.times: List[float] = []
        self.norms_s: List[float] = []
        self.norms_s1: List[float] = []

    def __call__(self, t: float, state: State):
        self.times.append(t)
        self.norms_s.append(sobolev_norm(state, self.s, self.weight, self.combine))
        self.norms_s1.append(sobolev_norm(state, self.s + 1, self.weight, self.combine))


def step_count(T_end: float, dt: float) -> int:
    """Number of dt steps covering T_end; dt has to divide T_end."""
    if T_end <= 0:
        raise ValueError(f"T_end must be > 0, got {T_end}")
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    count = int(round(T_end / dt))
    if count < 1 or abs(count * dt - T_end) > 1e-9 * max(1.0, T_end):
        raise ValueError(f"dt={dt} does not divide T_end={T_end}")
    return count


def check_positivity(state: State, params: GasParameters):
    density_from_sigma(state.sigma.samples(), params)


def _warn_stability(state: State, dt: float):
    peak = float(np.max(np.abs(state.samples()[1:]))) if state.grid.dim else 0.0
    if peak > 0 and dt > STABILITY_FACTOR / (state.grid.N * peak):
        logger.warning(
            f"dt={dt} above the advective guidance {STABILITY_FACTOR / (state.grid.N * peak):.3e} "
            f"(N={state.grid.N}, max|U|={peak:.3e})"
        )


def evolve(
    initial: State,
    T_end: float,
    dt: float,
    params: GasParameters,
    observers: Sequence[Observer] = (),
    record_every: int = 1,
    ceiling: Optional[float] = None,
    s: float = 2.0,
    nonlinear: bool = True,
) -> Trajectory:
    """
    Integrate v' = (A + B_v) v from initial with Lawson-RK4.

    Args:
        initial: State at t = 0
        T_end: Final time, a multiple of dt
        dt: Step
        params: Gas parameters
        observers: Called as observer(t, state) at t = 0 and after every step
        record_every: Keep every k-th state in the returned trajectory
        ceiling: Blow-up threshold on the s-norm; defaults to 10*||initial||_s + 1
        s: Sobolev index of the blow-up norm
        nonlinear: False drops B and propagates exactly

    Raises:
        BlowUp: If the s-norm becomes non-finite or exceeds the ceiling
        NonPhysicalDensity: If 1 + theta*sigma stops being positive
    """
    if record_every < 1:
        raise ValueError(f"record_every must be >= 1, got {record_every}")
    steps = step_count(T_end, dt)
    check_positivity(initial, params)
    if ceiling is None:
        ceiling = 10.0 * sobolev_norm(initial, s) + 1.0
    if nonlinear:
        _warn_stability(initial, dt)

    propagators = LawsonPropagators.build(initial.grid, dt)
    nonlinearity = autonomous_nonlinearity(params) if nonlinear else None
    logger.info(f"Evolving {steps} steps of dt={dt} on {initial.grid} (nonlinear={nonlinear})")

    state = initial
    times, states = [0.0], [initial]
    for observer in observers:
        observer(0.0, initial)
    for step in range(1, steps + 1):
        t = step * dt
        state = lawson_rk4_step(state, dt, propagators, nonlinearity, (step - 1) * dt)
        norm = sobolev_norm(state, s)
        if not math.isfinite(norm) or norm > ceiling:
            raise BlowUp(f"s-norm {norm:.3e} exceeds ceiling {ceiling:.3e} at t={t:.4g}")
        if nonlinear:
            check_positivity(state, params)
        for observer in observers:
            observer(t, state)
        if step % record_every == 0:
            times.append(t)
            states.append(state)
        logger.debug(f"step {step}/{steps} t={t:.4g} norm={norm:.6e}")

    if steps % record_every:
        logger.warning(f"record_every={record_every} does not divide {steps} steps; final state not recorded")
    return Trajectory(initial.grid, params, dt * record_every, np.array(times), states, step_dt=dt)


def frozen_nonlinearity(coefficient_path: Trajectory, params: GasParameters, offset: float = 0.0) -> Nonlinearity:
    """N(y, t) = B_{path(offset + t)} y with the path interpolated linearly in time."""
    def nonlinearity(y: State, t: float) -> State:
        return apply_B(coefficient_path.state_at(offset + t), y, params)
    return nonlinearity


def frozen_path(
    coefficient_path: Trajectory,
    initial: State,
    from_time: float,
    to_time: float,
    params: Optional[GasParameters] = None,
    steps: Optional[int] = None,
) -> List[State]:
    """
    States of y' = (A + B_{path(t)}) y at from_time + k*h, k = 0..steps.

    The step h = (to_time - from_time)/steps; steps defaults to the smallest
    count with h <= coefficient_path.step_dt.
    """
    if from_time < -TIME_TOLERANCE or to_time > coefficient_path.T_end + TIME_TOLERANCE or to_time < from_time:
        raise TimeOutOfRange(
            f"[{from_time}, {to_time}] not inside the coefficient path [0, {coefficient_path.T_end}]"
        )
    coefficient_path.states[0].check_grid(initial)
    params = params or coefficient_path.params
    span = to_time - from_time
    if span <= TIME_TOLERANCE:
        return [initial]
    if steps is None:
        steps = max(1, math.ceil(span / coefficient_path.step_dt - 1e-9))
    h = span / steps
    propagators = LawsonPropagators.build(initial.grid, h)
    nonlinearity = frozen_nonlinearity(coefficient_path, params)

    states = [initial]
    y = initial
    for k in range(steps):
        t = min(from_time + k * h, coefficient_path.T_end)
        y = lawson_rk4_step(y, h, propagators, nonlinearity, t)
        states.append(y)
    return states


def frozen_evolve(
    coefficient_path: Trajectory,
    initial: State,
    from_time: float,
    to_time: float,
    params: Optional[GasParameters] = None,
) -> State:
    """
    M_{path}(to_time, from_time) applied to initial.

    Raises:
        TimeOutOfRange: If [from_time, to_time] is not covered by the path
    """
    return frozen_path(coefficient_path, initial, from_time, to_time, params)[-1]
