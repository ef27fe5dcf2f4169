"""
Fourier representation of real periodic fields on [0,1]^dim.
"""

from .calculus import (
    bessel_shift,
    derivative_symbol,
    divergence_coeffs,
    gradient_coeffs,
    mean_project,
    spectral_derivative,
    truncate,
)
from .fields import ScalarField, State, to_physical, to_spectral
from .grid import GridSpec, make_grid, mode_index, retained_modes
from .norms import inner_product, sobolev_norm, sobolev_weight
from .products import dealiased_product
from .random_data import random_state
from .snapshot import read_snapshot, write_snapshot

__all__ = [
    "GridSpec",
    "ScalarField",
    "State",
    "bessel_shift",
    "dealiased_product",
    "derivative_symbol",
    "divergence_coeffs",
    "gradient_coeffs",
    "inner_product",
    "make_grid",
    "mean_project",
    "mode_index",
    "random_state",
    "read_snapshot",
    "retained_modes",
    "sobolev_norm",
    "sobolev_weight",
    "spectral_derivative",
    "to_physical",
    "to_spectral",
    "truncate",
    "write_snapshot",
]
