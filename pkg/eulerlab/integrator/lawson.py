"""
Lawson (integrating-factor) RK4 for v' = A v + N(v, t) with A applied exactly.

With E(h) = e^{hA}, classical RK4 on w = E(-t) v reads, after multiplying back by E:

    k1 = N(u)
    k2 = N(E(h/2) u + h/2 E(h/2) k1)
    k3 = N(E(h/2) u + h/2 k2)
    k4 = N(E(h) u + h E(h/2) k3)
    u+ = E(h) (u + h/6 k1) + h/3 E(h/2)(k2 + k3) + h/6 k4

so only E(h) and E(h/2) are needed.
"""

from dataclasses import dataclass
from typing import Callable, Optional

from ..dynamics.gas import GasParameters
from ..dynamics.operators import apply_B
from ..errors import GridMismatch
from ..linear.propagator import PropagatorTable, propagator_table
from ..spectral.fields import State
from ..spectral.grid import GridSpec

Nonlinearity = Callable[[State, float], State]


@dataclass(frozen=True, eq=False)
class LawsonPropagators:
    full: PropagatorTable
    half: PropagatorTable

    @classmethod
    def build(cls, grid: GridSpec, dt: float) -> "LawsonPropagators":
        return cls(propagator_table(grid, float(dt)), propagator_table(grid, 0.5 * float(dt)))

    @property
    def dt(self) -> float:
        return self.full.dt


def autonomous_nonlinearity(params: GasParameters) -> Nonlinearity:
    """N(v, t) = B_v v."""
    def nonlinearity(v: State, t: float) -> State:
        return apply_B(v, v, params)
    return nonlinearity


def lawson_rk4_step(
    state: State,
    dt: float,
    propagators: LawsonPropagators,
    nonlinearity: Optional[Nonlinearity] = None,
    t: float = 0.0,
) -> State:
    """
    One Lawson-RK4 step.

    Args:
        state: Value at time t
        dt: Step; must match the propagator tables
        propagators: e^{dt A} and e^{dt A/2} on the state's grid
        nonlinearity: N(v, t); None propagates the linear part only (exactly)
        t: Start time, forwarded to time-dependent nonlinearities

    Raises:
        GridMismatch: If the tables were built for another grid
    """
    if dt == 0:
        return State(state.grid, state.data.copy())
    if propagators.full.grid != state.grid:
        raise GridMismatch(f"{state.grid} vs propagator grid {propagators.full.grid}")
    if abs(propagators.dt - dt) > 1e-14 * max(1.0, abs(dt)):
        raise ValueError(f"propagators built for dt={propagators.dt}, step requested dt={dt}")
    full, half = propagators.full.apply, propagators.half.apply
    if nonlinearity is None:
        return full(state)

    k1 = nonlinearity(state, t)
    half_u = half(state)
    k2 = nonlinearity(half_u + half(k1) * (0.5 * dt), t + 0.5 * dt)
    k3 = nonlinearity(half_u + k2 * (0.5 * dt), t + 0.5 * dt)
    k4 = nonlinearity(full(state) + half(k3) * dt, t + dt)
    return full(state + k1 * (dt / 6.0)) + half(k2 + k3) * (dt / 3.0) + k4 * (dt / 6.0)
