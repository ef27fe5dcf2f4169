"""
State equation of the damped isentropic Euler system.
"""

from .gas import GasParameters, density_from_sigma, pressure, rho_sigma_transform, sigma_from_density
from .operators import apply_B, apply_B_adjoint, full_rhs, linearized_rhs

__all__ = [
    "GasParameters",
    "apply_B",
    "apply_B_adjoint",
    "density_from_sigma",
    "full_rhs",
    "linearized_rhs",
    "pressure",
    "rho_sigma_transform",
    "sigma_from_density",
]
