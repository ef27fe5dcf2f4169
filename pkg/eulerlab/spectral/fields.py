"""
Real periodic fields held as truncated Fourier coefficients.

Convention: f(x) = sum_xi coeff(xi) exp(2 pi i x.xi), so coeff(0) is the spatial mean.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np
import scipy.fft

from ..errors import GridMismatch, ShapeMismatch
from ..utils.parallel import thread_count
from .grid import GridSpec, mode_index


def _axes(grid: GridSpec) -> Tuple[int, ...]:
    return tuple(range(-grid.dim, 0))


def forward(grid: GridSpec, samples: np.ndarray) -> np.ndarray:
    """Physical samples -> coefficients over the trailing dim axes."""
    coeffs = scipy.fft.fftn(samples, axes=_axes(grid), workers=thread_count())
    return coeffs / grid.sample_count


def inverse(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    """Coefficients -> real physical samples over the trailing dim axes."""
    samples = scipy.fft.ifftn(coeffs * grid.sample_count, axes=_axes(grid), workers=thread_count())
    return samples.real


def reflect(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    """Array whose entry at xi is conj(coeffs(-xi))."""
    axes = _axes(grid)
    return np.conj(np.roll(np.flip(coeffs, axis=axes), 1, axis=axes))


def hermitian_part(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    return 0.5 * (coeffs + reflect(grid, coeffs))


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != self.grid.shape:
            raise ShapeMismatch(f"coefficient shape {self.coeffs.shape} != grid shape {self.grid.shape}")

    @classmethod
    def from_samples(cls, grid: GridSpec, samples: np.ndarray) -> "ScalarField":
        """
        Forward half of the transform pair.

        Raises:
            ShapeMismatch: If samples do not hold N^dim entries
        """
        samples = np.asarray(samples, dtype=np.float64)
        if samples.size != grid.sample_count:
            raise ShapeMismatch(f"expected {grid.sample_count} samples, got {samples.size}")
        return cls(grid, forward(grid, samples.reshape(grid.shape)))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    @classmethod
    def constant(cls, grid: GridSpec, value: float) -> "ScalarField":
        coeffs = np.zeros(grid.shape, dtype=np.complex128)
        coeffs[(0,) * grid.dim] = value
        return cls(grid, coeffs)

    @classmethod
    def single_mode(cls, grid: GridSpec, xi: Sequence[int], amplitude: complex = 1.0) -> "ScalarField":
        """Real field amplitude*e^{2 pi i x.xi} + c.c. (a lone mode for xi = 0)."""
        coeffs = np.zeros(grid.shape, dtype=np.complex128)
        if not any(xi):
            coeffs[(0,) * grid.dim] = np.real(amplitude)
        else:
            coeffs[mode_index(grid, xi)] += amplitude
            coeffs[mode_index(grid, [-v for v in xi])] += np.conj(amplitude)
        return cls(grid, coeffs)

    def samples(self) -> np.ndarray:
        """Inverse half of the transform pair."""
        return inverse(self.grid, self.coeffs)

    def mode(self, xi: Sequence[int]) -> complex:
        return complex(self.coeffs[mode_index(self.grid, xi)])

    @property
    def mean(self) -> float:
        return float(self.coeffs[(0,) * self.grid.dim].real)

    def masked(self) -> "ScalarField":
        return ScalarField(self.grid, np.where(self.grid.dealias_mask, self.coeffs, 0.0))

    def _check(self, other: "ScalarField"):
        if other.grid != self.grid:
            raise GridMismatch(f"{self.grid} vs {other.grid}")

    def __add__(self, other: Union["ScalarField", float]) -> "ScalarField":
        if isinstance(other, ScalarField):
            self._check(other)
            return ScalarField(self.grid, self.coeffs + other.coeffs)
        return self + ScalarField.constant(self.grid, other)

    __radd__ = __add__

    def __sub__(self, other: Union["ScalarField", float]) -> "ScalarField":
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "ScalarField":
        return ScalarField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "ScalarField":
        return ScalarField(self.grid, -self.coeffs)


@dataclass(frozen=True, eq=False)
class State:
    """(sigma, U) stacked as one coefficient array of shape (dim+1, N, ..., N)."""
    grid: GridSpec
    data: np.ndarray

    def __post_init__(self):
        expected = (self.grid.dim + 1,) + self.grid.shape
        if self.data.shape != expected:
            raise ShapeMismatch(f"state shape {self.data.shape} != {expected}")

    @classmethod
    def from_fields(cls, sigma: ScalarField, velocity: Sequence[ScalarField]) -> "State":
        grid = sigma.grid
        if len(velocity) != grid.dim:
            raise ShapeMismatch(f"expected {grid.dim} velocity components, got {len(velocity)}")
        for comp in velocity:
            if comp.grid != grid:
                raise GridMismatch(f"{grid} vs {comp.grid}")
        return cls(grid, np.stack([sigma.coeffs] + [u.coeffs for u in velocity]))

    @classmethod
    def from_samples(cls, grid: GridSpec, sigma: np.ndarray, velocity: Sequence[np.ndarray]) -> "State":
        return cls.from_fields(
            ScalarField.from_samples(grid, sigma),
            [ScalarField.from_samples(grid, u) for u in velocity],
        )

    @classmethod
    def zeros(cls, grid: GridSpec) -> "State":
        return cls(grid, np.zeros((grid.dim + 1,) + grid.shape, dtype=np.complex128))

    @property
    def sigma(self) -> ScalarField:
        return ScalarField(self.grid, self.data[0])

    @property
    def velocity(self) -> Tuple[ScalarField, ...]:
        return tuple(ScalarField(self.grid, self.data[i + 1]) for i in range(self.grid.dim))

    def components(self) -> Tuple[ScalarField, ...]:
        return (self.sigma,) + self.velocity

    def samples(self) -> np.ndarray:
        """Physical samples of all components, shape (dim+1, N, ..., N)."""
        return inverse(self.grid, self.data)

    def masked(self) -> "State":
        return State(self.grid, np.where(self.grid.dealias_mask, self.data, 0.0))

    def check_grid(self, other: "State"):
        if other.grid != self.grid:
            raise GridMismatch(f"{self.grid} vs {other.grid}")

    def __add__(self, other: "State") -> "State":
        self.check_grid(other)
        return State(self.grid, self.data + other.data)

    def __sub__(self, other: "State") -> "State":
        self.check_grid(other)
        return State(self.grid, self.data - other.data)

    def __mul__(self, scalar: float) -> "State":
        return State(self.grid, self.data * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "State":
        return State(self.grid, -self.data)


def to_spectral(grid: GridSpec, samples: np.ndarray) -> ScalarField:
    return ScalarField.from_samples(grid, samples)


def to_physical(field: ScalarField) -> np.ndarray:
    return field.samples()
