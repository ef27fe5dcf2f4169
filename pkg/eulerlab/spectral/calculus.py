"""
Fourier multipliers: derivatives, mean projection, the Bessel shift S, truncation.
"""

from functools import lru_cache
from typing import Tuple, Union

import numpy as np

from .fields import ScalarField, State
from .grid import GridSpec

Spectral = Union[ScalarField, State]

BESSEL_DIRECTIONS = ("S", "S_inv")


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@lru_cache(maxsize=64)
def derivative_symbol(grid: GridSpec) -> np.ndarray:
    """2 pi i xi per axis, shape (dim, N, ..., N)."""
    return _frozen(2j * np.pi * grid.modes.astype(np.float64))


@lru_cache(maxsize=64)
def _bessel_weight(grid: GridSpec, direction: str) -> np.ndarray:
    weight = np.sqrt(1.0 + grid.xi_squared)
    return _frozen(weight if direction == "S" else 1.0 / weight)


def _with_data(x: Spectral, data: np.ndarray) -> Spectral:
    if isinstance(x, State):
        return State(x.grid, data)
    return ScalarField(x.grid, data)


def _data(x: Spectral) -> np.ndarray:
    return x.data if isinstance(x, State) else x.coeffs


def spectral_derivative(field: ScalarField, axis: int) -> ScalarField:
    """d/dx_axis: coeff(xi) times 2 pi i xi_axis."""
    if not 0 <= axis < field.grid.dim:
        raise ValueError(f"axis {axis} out of range for dim={field.grid.dim}")
    return ScalarField(field.grid, field.coeffs * derivative_symbol(field.grid)[axis])


def gradient_coeffs(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    """Gradient of a stack of scalars: (..., N..) -> (dim, ..., N..)."""
    symbol = derivative_symbol(grid)
    extra = coeffs.ndim - grid.dim
    return np.stack([symbol[j].reshape((1,) * extra + grid.shape) * coeffs for j in range(grid.dim)])


def divergence_coeffs(grid: GridSpec, vector: np.ndarray) -> np.ndarray:
    """Divergence of a (dim, N..) coefficient stack."""
    return np.sum(derivative_symbol(grid) * vector, axis=0)


def mean_project(field: ScalarField) -> Tuple[float, ScalarField]:
    """Split f into its average Pf and the zero-mean remainder (I-P)f."""
    origin = (0,) * field.grid.dim
    coeffs = field.coeffs.copy()
    mean = float(coeffs[origin].real)
    coeffs[origin] = 0.0
    return mean, ScalarField(field.grid, coeffs)


def bessel_shift(x: Spectral, direction: str = "S") -> Spectral:
    """
    Apply S = (1+|xi|^2)^{1/2} or its inverse.

    Args:
        x: ScalarField or State
        direction: "S" or "S_inv"
    """
    if direction not in BESSEL_DIRECTIONS:
        raise ValueError(f"direction must be one of {BESSEL_DIRECTIONS}, got {direction!r}")
    return _with_data(x, _data(x) * _bessel_weight(x.grid, direction))


def truncate(x: Spectral, K: int) -> Spectral:
    """Keep modes with |xi|_inf <= K."""
    return _with_data(x, np.where(x.grid.box_mask(K), _data(x), 0.0))
