"""
Reproducible random initial data (sigma_0, U_0).
"""

from typing import Optional

import numpy as np
from loguru import logger
from scipy.optimize import brentq

from .fields import State, hermitian_part
from .grid import GridSpec
from .norms import sobolev_norm

SIGMA_MEANS = ("zero", "unit_mass")
SIGMA_CAP_MARGIN = 0.99


def default_spectrum_exponent(s_target: float) -> float:
    return 2.0 * (s_target + 2.0)


def _unit_mass_shift(sigma: np.ndarray, theta: float) -> float:
    """Constant m with mean((1 + theta*(sigma+m))^{1/theta}) = 1."""
    def excess(m: float) -> float:
        return float(np.mean((1.0 + theta * (sigma + m)) ** (1.0 / theta))) - 1.0

    lo = -float(sigma.min()) - 1.0 / theta + 1e-12
    hi = -float(sigma.min()) + 1.0
    return brentq(excess, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)


def random_state(
    seed: int,
    grid: GridSpec,
    s_target: float,
    norm_target: float,
    spectrum_exponent: Optional[float] = None,
    sigma_mean: str = "zero",
    theta: float = 0.2,
) -> State:
    """
    Hermitian-symmetric random State with a power-law envelope.

    Args:
        seed: Seed for numpy's default_rng
        grid: Target grid
        s_target: Sobolev index at which the norm is fixed
        norm_target: Required sobolev_norm(state, s_target), > 0
        spectrum_exponent: Envelope (1+|xi|^2)^{-p/2}; defaults to 2(s_target+2)
        sigma_mean: "zero" keeps P sigma = 0; "unit_mass" shifts it so that the mean density is 1
        theta: (gamma-1)/2, used by the amplitude cap and the unit-mass shift

    Returns:
        State supported on the dealias band
    """
    if norm_target <= 0:
        raise ValueError(f"norm_target must be > 0, got {norm_target}")
    if sigma_mean not in SIGMA_MEANS:
        raise ValueError(f"sigma_mean must be one of {SIGMA_MEANS}, got {sigma_mean!r}")
    p = default_spectrum_exponent(s_target) if spectrum_exponent is None else spectrum_exponent

    rng = np.random.default_rng(seed)
    size = (grid.dim + 1,) + grid.shape
    raw = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    data = hermitian_part(grid, raw) * (1.0 + grid.xi_squared) ** (-p / 2.0)
    data = np.where(grid.dealias_mask, data, 0.0)
    data[(0,) * (grid.dim + 1)] = 0.0

    state = State(grid, data)
    state = state * (norm_target / sobolev_norm(state, s_target))

    sigma = state.sigma.samples()
    peak = float(np.max(np.abs(sigma)))
    cap = 1.0 / (2.0 * theta)
    if peak >= cap:
        shrink = SIGMA_CAP_MARGIN * cap / peak
        logger.warning(f"sigma amplitude {peak:.3e} exceeds cap {cap:.3e}; scaling sigma by {shrink:.3e}")
        data = state.data.copy()
        data[0] *= shrink
        state = State(grid, data)
        sigma = sigma * shrink

    if sigma_mean == "unit_mass":
        data = state.data.copy()
        data[(0,) * (grid.dim + 1)] = _unit_mass_shift(sigma, theta)
        state = State(grid, data)
    return state
