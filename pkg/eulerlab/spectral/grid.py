"""
Periodic grids on [0,1]^dim: mode lattices, dealias masks, sample points.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from ..errors import InvalidGrid

SUPPORTED_DIMS = (1, 2, 3)
MIN_MODES = 8


@dataclass(frozen=True)
class GridSpec:
    """Periodic box discretization; hashable so derived arrays can be cached per grid."""
    dim: int
    modes_per_axis: int
    dealias_fraction: float = 2.0 / 3.0

    @property
    def N(self) -> int:
        return self.modes_per_axis

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.modes_per_axis,) * self.dim

    @property
    def sample_count(self) -> int:
        return self.modes_per_axis ** self.dim

    @property
    def cutoff(self) -> int:
        """Largest retained |xi_i|: strictly below dealias_fraction * N/2."""
        edge = self.dealias_fraction * self.modes_per_axis / 2
        return int(math.ceil(edge - 1e-9)) - 1

    @property
    def modes(self) -> np.ndarray:
        """Integer mode vectors, shape (dim, N, ..., N), FFT ordering."""
        return _modes(self)

    @property
    def xi_squared(self) -> np.ndarray:
        return _xi_squared(self)

    @property
    def dealias_mask(self) -> np.ndarray:
        return _dealias_mask(self)

    @property
    def points(self) -> np.ndarray:
        """Physical sample coordinates x_j = j/N, shape (dim, N, ..., N)."""
        return _points(self)

    def box_mask(self, K: int) -> np.ndarray:
        """Modes with |xi|_inf <= K."""
        return _box_mask(self, K)


def make_grid(dim: int, N: int, dealias_fraction: float = 2.0 / 3.0) -> GridSpec:
    """
    Build a grid on [0,1]^dim.

    Args:
        dim: Spatial dimension, 1..3
        N: Modes per axis, even and >= 8
        dealias_fraction: Fraction of the half-band kept by products

    Returns:
        GridSpec

    Raises:
        InvalidGrid: On odd N, N < 8 or unsupported dim
    """
    if dim not in SUPPORTED_DIMS:
        raise InvalidGrid(f"dim must be one of {SUPPORTED_DIMS}, got {dim}")
    if N % 2 != 0:
        raise InvalidGrid(f"N must be even, got {N}")
    if N < MIN_MODES:
        raise InvalidGrid(f"N must be >= {MIN_MODES}, got {N}")
    if not 0.0 < dealias_fraction <= 1.0:
        raise InvalidGrid(f"dealias_fraction must lie in (0, 1], got {dealias_fraction}")
    return GridSpec(dim=int(dim), modes_per_axis=int(N), dealias_fraction=float(dealias_fraction))


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@lru_cache(maxsize=64)
def _modes(grid: GridSpec) -> np.ndarray:
    axis = np.fft.fftfreq(grid.N, d=1.0 / grid.N).round().astype(np.int64)
    mesh = np.meshgrid(*([axis] * grid.dim), indexing="ij")
    return _frozen(np.stack(mesh))


@lru_cache(maxsize=64)
def _xi_squared(grid: GridSpec) -> np.ndarray:
    return _frozen(np.sum(_modes(grid).astype(np.float64) ** 2, axis=0))


@lru_cache(maxsize=64)
def _box_mask(grid: GridSpec, K: int) -> np.ndarray:
    return _frozen(np.all(np.abs(_modes(grid)) <= K, axis=0))


@lru_cache(maxsize=64)
def _dealias_mask(grid: GridSpec) -> np.ndarray:
    return _box_mask(grid, grid.cutoff)


@lru_cache(maxsize=64)
def _points(grid: GridSpec) -> np.ndarray:
    axis = np.arange(grid.N, dtype=np.float64) / grid.N
    return _frozen(np.stack(np.meshgrid(*([axis] * grid.dim), indexing="ij")))


def mode_index(grid: GridSpec, xi) -> Tuple[int, ...]:
    """Array index of lattice mode xi (FFT ordering)."""
    xi = tuple(int(v) for v in xi)
    if len(xi) != grid.dim:
        raise ValueError(f"mode {xi} has wrong length for dim={grid.dim}")
    half = grid.N // 2
    for v in xi:
        if not -half <= v < half:
            raise ValueError(f"mode {xi} outside the grid band [-{half}, {half})")
    return tuple(v % grid.N for v in xi)


def retained_modes(grid: GridSpec, K: int = None) -> np.ndarray:
    """
    Lattice modes with |xi|_inf <= K in lexicographic order, shape (count, dim).

    K defaults to the dealias cutoff.
    """
    K = grid.cutoff if K is None else K
    axis = np.arange(-K, K + 1)
    mesh = np.meshgrid(*([axis] * grid.dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)
