"""
Spectral Sobolev norms.

Two weight families:
  physical  (1 + 4 pi^2 |xi|^2)^s, equivalent to the derivative-sum norm; used by solver diagnostics
  paper     (1 + |xi|^2)^s, for which S is an exact isometry X_{s+1} -> X_s
"""

from functools import lru_cache
from typing import Union

import numpy as np

from ..errors import GridMismatch
from .fields import ScalarField, State
from .grid import GridSpec

WEIGHTS = ("physical", "paper")
COMBINES = ("sum", "l2")


@lru_cache(maxsize=128)
def sobolev_weight(grid: GridSpec, s: float, weight: str = "physical") -> np.ndarray:
    if weight not in WEIGHTS:
        raise ValueError(f"weight must be one of {WEIGHTS}, got {weight!r}")
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    scale = 4.0 * np.pi ** 2 if weight == "physical" else 1.0
    w = (1.0 + scale * grid.xi_squared) ** s
    w.setflags(write=False)
    return w


def _squared(grid: GridSpec, coeffs: np.ndarray, s: float, weight: str) -> np.ndarray:
    """Weighted squared norms over the trailing dim axes."""
    w = sobolev_weight(grid, s, weight)
    axes = tuple(range(-grid.dim, 0))
    return np.sum(w * (coeffs.real ** 2 + coeffs.imag ** 2), axis=axes)


def component_norms(x: Union[ScalarField, State], s: float, weight: str = "physical") -> np.ndarray:
    data = x.data if isinstance(x, State) else x.coeffs[None]
    return np.sqrt(_squared(x.grid, data, s, weight))


def sobolev_norm(x: Union[ScalarField, State], s: float, weight: str = "physical", combine: str = "sum") -> float:
    """
    (sum_xi w_s(xi) |f(xi)|^2)^{1/2} per scalar; a State combines its components.

    Args:
        x: ScalarField or State
        s: Sobolev index, >= 0 (fractional allowed)
        weight: "physical" or "paper"
        combine: "sum" of component norms, or "l2" (Euclidean) combination

    Returns:
        The norm
    """
    if combine not in COMBINES:
        raise ValueError(f"combine must be one of {COMBINES}, got {combine!r}")
    norms = component_norms(x, s, weight)
    if combine == "sum":
        return float(np.sum(norms))
    return float(np.sqrt(np.sum(norms ** 2)))


def inner_product(x: Union[ScalarField, State], y: Union[ScalarField, State], s: float, weight: str = "physical") -> float:
    """Real H^s inner product <x, y>_s summed over components."""
    if x.grid != y.grid:
        raise GridMismatch(f"{x.grid} vs {y.grid}")
    a = x.data if isinstance(x, State) else x.coeffs
    b = y.data if isinstance(y, State) else y.coeffs
    w = sobolev_weight(x.grid, s, weight)
    return float(np.sum(w * (np.conj(a) * b).real))


def l2_physical(samples: np.ndarray) -> float:
    """L^2 norm on [0,1]^dim from physical samples (mean of squares)."""
    return float(np.sqrt(np.mean(samples ** 2)))
