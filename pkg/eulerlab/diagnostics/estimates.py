"""
Functional-analytic estimates measured on the grid: Poincare ratio, the
dissipativity form of B, and the commutator [S, B] on X_s.
"""

from typing import Callable, Optional, Tuple

import numpy as np
from loguru import logger

from ..dynamics.gas import GasParameters
from ..dynamics.operators import apply_B, apply_B_adjoint
from ..errors import ZeroGradient
from ..spectral.calculus import bessel_shift, gradient_coeffs
from ..spectral.fields import ScalarField, State, inverse
from ..spectral.norms import inner_product, sobolev_norm, sobolev_weight
from ..spectral.random_data import random_state
from ..utils.parallel import ordered_map

POWER_ITERATIONS = 30
POWER_PROBES = 8
POWER_RTOL = 1e-6

Operator = Callable[[State], State]


def poincare_ratio(field: ScalarField) -> float:
    """
    ||f||_{L2} / ||grad f||_{L2}.

    Raises:
        ZeroGradient: If f is constant up to roundoff
    """
    power = field.coeffs.real ** 2 + field.coeffs.imag ** 2
    value = float(np.sqrt(np.sum(power)))
    gradient = float(np.sqrt(np.sum(4.0 * np.pi ** 2 * field.grid.xi_squared * power)))
    if gradient <= 1e-13 * max(value, np.finfo(float).tiny):
        raise ZeroGradient("Poincare ratio undefined for a constant field")
    return value / gradient


def gradient_sup(state: State) -> float:
    """max over grid points of |d_j f| for every component f and axis j."""
    grid = state.grid
    return float(np.max(np.abs(inverse(grid, gradient_coeffs(grid, state.data)))))


def dissipativity_form(
    coefficients: State,
    argument: State,
    s: float,
    params: Optional[GasParameters] = None,
    weight: str = "physical",
) -> float:
    """<B_coefficients argument, argument>_{H^s}.

    Raises:
        GridMismatch: If the states live on different grids
    """
    params = params or GasParameters()
    return inner_product(apply_B(coefficients, argument, params), argument, s, weight)


def _weighted_adjoint(adjoint: Operator, s: float, weight: str) -> Operator:
    """Adjoint under <.,.>_{H^s} from the adjoint under the coefficient inner product."""
    def apply(y: State) -> State:
        w = sobolev_weight(y.grid, s, weight)
        out = adjoint(State(y.grid, y.data * w))
        return State(y.grid, out.data / w)
    return apply


def power_iteration(
    operator: Operator,
    start: State,
    s: float,
    weight: str,
    iterations: int = POWER_ITERATIONS,
    rtol: float = POWER_RTOL,
) -> Tuple[float, State]:
    """
    Largest Rayleigh quotient <x, Op x>_s / <x, x>_s of an H^s-self-adjoint,
    nonnegative operator.

    Returns:
        (quotient, last iterate normalized to unit H^s norm)
    """
    x = start * (1.0 / np.sqrt(inner_product(start, start, s, weight)))
    quotient = 0.0
    for _ in range(iterations):
        y = operator(x)
        previous, quotient = quotient, inner_product(x, y, s, weight)
        size = np.sqrt(inner_product(y, y, s, weight))
        if size == 0 or not np.isfinite(size):
            break
        x = y * (1.0 / size)
        if abs(quotient - previous) <= rtol * abs(quotient):
            break
    return max(quotient, 0.0), x


def _starting_vectors(grid, s: float, count: int, seed: int):
    return [random_state(seed + k, grid, s, 1.0) for k in range(count)]


def dissipativity_constant(
    coefficients: State,
    s: float,
    params: Optional[GasParameters] = None,
    weight: str = "physical",
    n_probes: int = 1,
    seed: int = 0,
    iterations: int = POWER_ITERATIONS,
) -> Tuple[float, State]:
    """
    sup_x |<B x, x>_s| / ||x||_s^2 over the dealiased band.

    The sup is the spectral radius of the H^s-symmetric part H of B, found by
    power iteration on H^2; the returned argument is the last iterate.
    """
    params = params or GasParameters()
    forward_op = lambda x: apply_B(coefficients, x, params)
    backward_op = _weighted_adjoint(lambda y: apply_B_adjoint(coefficients, y, params), s, weight)

    def symmetric(x: State) -> State:
        return (forward_op(x) + backward_op(x)) * 0.5

    def squared(x: State) -> State:
        return symmetric(symmetric(x))

    best, argument = 0.0, None
    for start in _starting_vectors(coefficients.grid, s, n_probes, seed):
        quotient, x = power_iteration(squared, start, s, weight, iterations)
        if argument is None or quotient > best:
            best, argument = quotient, x
    return float(np.sqrt(best)), argument


def commutator_norm_probe(
    state: State,
    s: float,
    n_probes: int = POWER_PROBES,
    seed: int = 0,
    params: Optional[GasParameters] = None,
    iterations: int = POWER_ITERATIONS,
) -> float:
    """
    Operator norm of S B_state S^{-1} - B_state on X_s with the (1+|xi|^2)^s weight.

    Power iteration on C^* C from n_probes random starts; returns the
    square root of the largest Rayleigh quotient.
    """
    if n_probes < 1:
        raise ValueError(f"n_probes must be >= 1, got {n_probes}")
    params = params or GasParameters()
    weight = "paper"

    def commutator(x: State) -> State:
        return bessel_shift(apply_B(state, bessel_shift(x, "S_inv"), params), "S") - apply_B(state, x, params)

    def commutator_adjoint(y: State) -> State:
        return (bessel_shift(apply_B_adjoint(state, bessel_shift(y, "S"), params), "S_inv")
                - apply_B_adjoint(state, y, params))

    weighted = _weighted_adjoint(commutator_adjoint, s, weight)

    def normal(x: State) -> State:
        return weighted(commutator(x))

    starts = _starting_vectors(state.grid, s, n_probes, seed)
    quotients = ordered_map(lambda start: power_iteration(normal, start, s, weight, iterations)[0], starts)
    value = float(np.sqrt(max(quotients)))
    logger.debug(f"commutator probe: {value:.6e} over {n_probes} probes (|state|_s+1={sobolev_norm(state, s + 1):.3e})")
    return value
