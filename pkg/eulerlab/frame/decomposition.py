"""
Moving-frame decomposition (sigma, U) = (c, 0) + lift(sigma_1, U_1) and the
dynamics of its parts.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..dynamics.gas import GasParameters
from ..dynamics.operators import linearized_rhs
from ..spectral.calculus import mean_project
from ..spectral.fields import ScalarField, State, hermitian_part
from ..spectral.norms import sobolev_norm
from .functionals import FrameFunctionals


@dataclass(frozen=True, eq=False)
class DecomposedState:
    c: float
    sigma1: ScalarField
    u1: Tuple[ScalarField, ...]

    def tangent(self) -> State:
        """(sigma_1, U_1) as a State."""
        return State.from_fields(self.sigma1, self.u1)

    def reconstruct(self, frame: FrameFunctionals) -> State:
        """sigma = c + (I + L1) sigma_1 + L2 U_1, U = U_1."""
        shift = self.c + frame.apply_l1(self.sigma1) + frame.apply_l2(self.u1)
        return State.from_fields(self.sigma1 + shift, self.u1)

    def part_norm(self, s: float) -> float:
        """||sigma_1||_s + ||U_1||_s."""
        return sobolev_norm(self.tangent(), s)


def decompose_state(state: State, frame: FrameFunctionals) -> DecomposedState:
    """sigma_1 = (I-P) sigma, U_1 = U, c = P sigma - L1 sigma_1 - L2 U."""
    mean, sigma1 = mean_project(state.sigma)
    velocity = state.velocity
    c = mean - frame.apply_l1(sigma1) - frame.apply_l2(velocity)
    return DecomposedState(c, sigma1, velocity)


def lift(frame: FrameFunctionals, sigma1: ScalarField, u1: Sequence[ScalarField]) -> State:
    """[[I + L1, L2], [0, I]] (sigma_1, U_1)."""
    shift = frame.apply_l1(sigma1) + frame.apply_l2(u1)
    return State.from_fields(sigma1 + shift, list(u1))


def inverse_lift(frame: FrameFunctionals, state: State) -> State:
    """[[I - L1, -L2], [0, I]] applied to a state."""
    shift = frame.apply(state)
    return State.from_fields(state.sigma - shift, list(state.velocity))


def random_probes(frame: FrameFunctionals, count: int, seed: int = 0) -> List[State]:
    """Real zero-mean-sigma probes supported on the frame box."""
    grid = frame.grid
    rng = np.random.default_rng(seed)
    size = (grid.dim + 1,) + grid.shape
    mask = grid.box_mask(frame.frame_truncation)
    probes = []
    for _ in range(count):
        raw = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        data = np.where(mask, hermitian_part(grid, raw), 0.0)
        data[(0,) * (grid.dim + 1)] = 0.0
        probes.append(State(grid, data))
    return probes


def frame_residual(
    state: State,
    frame: FrameFunctionals,
    params: GasParameters,
    probes: Optional[Sequence[State]] = None,
    s: float = 2.0,
    n_probes: int = 8,
    seed: int = 0,
) -> float:
    """
    Largest violation of E_2-invariance over the probes.

    Each probe (sigma_1, U_1) is lifted to w, r = (A + B_state) w is taken at
    full resolution, and |P r_sigma - L1 r_sigma - L2 r_U| / ||probe||_s is
    recorded.
    """
    if probes is None:
        probes = random_probes(frame, n_probes, seed)
    worst = 0.0
    for probe in probes:
        norm = sobolev_norm(probe, s)
        if norm == 0:
            continue
        w = lift(frame, *_split(probe))
        r = linearized_rhs(state, w, params)
        violation = abs(r.sigma.mean - frame.apply(r))
        worst = max(worst, violation / norm)
    return worst


def _split(state: State) -> Tuple[ScalarField, Tuple[ScalarField, ...]]:
    return mean_project(state.sigma)[1], state.velocity


def conjugated_rhs(decomp: DecomposedState, frame: FrameFunctionals, params: GasParameters) -> State:
    """
    d/dt (sigma_1, U_1) in the moving frame.

    (A + B_{sigma,U})(sigma_1, U_1) with sigma = c + (I+L1) sigma_1 + L2 U_1,
    plus the scalar -(L1 r_sigma + L2 r_U) added to the sigma mean, where r is
    that first term.
    """
    coefficients = decomp.reconstruct(frame)
    r = linearized_rhs(coefficients, decomp.tangent(), params)
    correction = -frame.apply(r)
    return State.from_fields(r.sigma + correction, list(r.velocity))


def frame_rate(frame_before: FrameFunctionals, frame_after: FrameFunctionals, span: float) -> FrameFunctionals:
    """Finite-difference d/dt (L1, L2) over a time span."""
    if span <= 0:
        raise ValueError(f"span must be > 0, got {span}")
    return (frame_after - frame_before) * (1.0 / span)


def c_rate(rate: FrameFunctionals, state: State) -> float:
    """dc/dt = -(d/dt L1)(I-P) sigma - (d/dt L2) U."""
    return -rate.apply(state)
