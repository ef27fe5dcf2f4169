"""
Alias-free quadratic products under the truncation rule.

Inputs are restricted to |xi_i| <= cutoff before the pointwise product; since
3*cutoff < N the product's retained band carries no aliased content.
"""

import numpy as np

from ..errors import GridMismatch
from .fields import ScalarField, forward, inverse
from .grid import GridSpec


def dealias(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    return np.where(grid.dealias_mask, coeffs, 0.0)


def masked_samples(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    """Physical samples of the dealias-masked coefficients."""
    return inverse(grid, dealias(grid, coeffs))


def masked_forward(grid: GridSpec, samples: np.ndarray) -> np.ndarray:
    """Transform a physical product back and drop the masked band."""
    return dealias(grid, forward(grid, samples))


def dealiased_product(f: ScalarField, g: ScalarField) -> ScalarField:
    """
    Pointwise product with inputs and output restricted to the dealias mask.

    Raises:
        GridMismatch: If f and g live on different grids
    """
    if f.grid != g.grid:
        raise GridMismatch(f"{f.grid} vs {g.grid}")
    grid = f.grid
    product = masked_samples(grid, f.coeffs) * masked_samples(grid, g.coeffs)
    return ScalarField(grid, masked_forward(grid, product))
