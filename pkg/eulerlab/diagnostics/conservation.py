"""
Mass integral and residuals of the density-form equations

    rho_t + div(rho U) = 0,
    (rho U)_t + div(rho U x U) + grad P(rho) + rho U = 0

evaluated on stored snapshots.
"""

from typing import List, Tuple

import numpy as np

from ..dynamics.gas import GasParameters, density_from_sigma, pressure
from ..errors import InsufficientSamples
from ..integrator.trajectory import Trajectory
from ..spectral.calculus import derivative_symbol
from ..spectral.fields import State, forward, inverse
from ..spectral.grid import GridSpec


def mass_integral(state: State, params: GasParameters) -> float:
    """Integral of rho over [0,1]^dim.

    Raises:
        NonPhysicalDensity: If 1 + theta*sigma <= 0 somewhere
    """
    return float(np.mean(density_from_sigma(state.sigma.samples(), params)))


def _divergence(grid: GridSpec, vector: np.ndarray) -> np.ndarray:
    """Spectral divergence of a physical (dim, [extra,] N..) array over its first axis."""
    coeffs = forward(grid, vector)
    symbol = derivative_symbol(grid)
    if vector.ndim == grid.dim + 1:
        return inverse(grid, np.sum(symbol * coeffs, axis=0))
    return inverse(grid, np.sum(symbol[:, None] * coeffs, axis=0))


def _gradient(grid: GridSpec, scalar: np.ndarray) -> np.ndarray:
    return inverse(grid, derivative_symbol(grid) * forward(grid, scalar))


def _density_and_momentum(states: List[State], params: GasParameters) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    densities, momenta = [], []
    for state in states:
        samples = state.samples()
        rho = density_from_sigma(samples[0], params)
        densities.append(rho)
        momenta.append(rho * samples[1:])
    return densities, momenta


def _l2(grid: GridSpec, array: np.ndarray) -> float:
    """L2 norm over the box, summed over leading component axes."""
    return float(np.sqrt(np.sum(array ** 2) / grid.sample_count))


def _relative(residuals: List[float], scales: List[float]) -> float:
    worst, scale = max(residuals), max(scales)
    return worst / scale if scale > 0 else worst


def _check_length(trajectory: Trajectory):
    if len(trajectory) < 3:
        raise InsufficientSamples(f"need at least 3 snapshots, got {len(trajectory)}")


def continuity_residual(trajectory: Trajectory, params: GasParameters) -> float:
    """
    max_k ||rho_t + div(rho U)||_{L2} / max_k ||rho U||_{L2} with rho_t by central differences.
    """
    _check_length(trajectory)
    grid, dt = trajectory.grid, trajectory.dt
    densities, momenta = _density_and_momentum(trajectory.states, params)
    residuals, scales = [], []
    for k in range(1, len(densities) - 1):
        rate = (densities[k + 1] - densities[k - 1]) / (2.0 * dt)
        residuals.append(_l2(grid, rate + _divergence(grid, momenta[k])))
        scales.append(_l2(grid, momenta[k]))
    return _relative(residuals, scales)


def momentum_residual(trajectory: Trajectory, params: GasParameters) -> float:
    """
    max_k ||(rho U)_t + div(rho U x U) + grad P + rho U||_{L2} / max_k ||rho U||_{L2}.
    """
    _check_length(trajectory)
    grid, dt = trajectory.grid, trajectory.dt
    densities, momenta = _density_and_momentum(trajectory.states, params)
    residuals, scales = [], []
    for k in range(1, len(densities) - 1):
        rate = (momenta[k + 1] - momenta[k - 1]) / (2.0 * dt)
        velocity = momenta[k] / densities[k]
        flux = velocity[:, None] * momenta[k][None, :]
        residual = rate + _divergence(grid, flux) + _gradient(grid, pressure(densities[k], params)) + momenta[k]
        residuals.append(_l2(grid, residual))
        scales.append(_l2(grid, momenta[k]))
    return _relative(residuals, scales)
