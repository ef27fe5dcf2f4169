"""
Polytropic gas with P(rho) = rho^gamma / gamma and the symmetrizing variable
sigma = (rho^theta - 1)/theta, theta = (gamma - 1)/2.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import NonPhysicalDensity
from ..spectral.fields import ScalarField

TRANSFORM_DIRECTIONS = ("to_sigma", "to_rho")


class GasParameters(BaseModel):
    """Adiabatic exponent; damping coefficient and reference density are fixed to 1."""
    model_config = ConfigDict(frozen=True)

    gamma: float = Field(default=1.4, gt=1.0)

    @property
    def theta(self) -> float:
        return 0.5 * (self.gamma - 1.0)


def density_from_sigma(sigma: np.ndarray, params: GasParameters) -> np.ndarray:
    """rho = (1 + theta*sigma)^{1/theta} on physical samples."""
    base = 1.0 + params.theta * sigma
    low = float(np.min(base))
    if not low > 0.0:
        raise NonPhysicalDensity(f"1 + theta*sigma reaches {low:.3e} <= 0")
    return base ** (1.0 / params.theta)


def sigma_from_density(rho: np.ndarray, params: GasParameters) -> np.ndarray:
    low = float(np.min(rho))
    if not low > 0.0:
        raise NonPhysicalDensity(f"density reaches {low:.3e} <= 0")
    return (rho ** params.theta - 1.0) / params.theta


def pressure(rho: np.ndarray, params: GasParameters) -> np.ndarray:
    return rho ** params.gamma / params.gamma


def rho_sigma_transform(field: ScalarField, direction: str, params: GasParameters) -> ScalarField:
    """
    Pointwise rho <-> sigma on the physical grid.

    Args:
        field: rho (direction "to_sigma") or sigma (direction "to_rho")
        direction: "to_sigma" or "to_rho"
        params: Gas parameters

    Raises:
        NonPhysicalDensity: When positivity fails on the grid
    """
    if direction not in TRANSFORM_DIRECTIONS:
        raise ValueError(f"direction must be one of {TRANSFORM_DIRECTIONS}, got {direction!r}")
    samples = field.samples()
    if direction == "to_sigma":
        out = sigma_from_density(samples, params)
    else:
        out = density_from_sigma(samples, params)
    return ScalarField.from_samples(field.grid, out)
