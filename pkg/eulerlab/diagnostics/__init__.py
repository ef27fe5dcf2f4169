"""
Quantitative checks on simulated trajectories.
"""

from .conservation import continuity_residual, mass_integral, momentum_residual
from .decay import fit_decay, local_maxima
from .estimates import (
    commutator_norm_probe,
    dissipativity_constant,
    dissipativity_form,
    gradient_sup,
    poincare_ratio,
    power_iteration,
)
from .slaving import slaving_series

__all__ = [
    "commutator_norm_probe",
    "continuity_residual",
    "dissipativity_constant",
    "dissipativity_form",
    "fit_decay",
    "gradient_sup",
    "local_maxima",
    "mass_integral",
    "momentum_residual",
    "poincare_ratio",
    "power_iteration",
    "slaving_series",
]
