"""
Exact linear propagator e^{tA} of the damped acoustic system.
"""

from .propagator import (
    ModeSymbol,
    PropagatorTable,
    apply_A,
    apply_semigroup,
    mode_eigensystem,
    mode_exponential,
    mode_symbol,
    propagator_table,
    semigroup_constant,
    split_velocity,
    symbol_matrix,
)

__all__ = [
    "ModeSymbol",
    "PropagatorTable",
    "apply_A",
    "apply_semigroup",
    "mode_eigensystem",
    "mode_exponential",
    "mode_symbol",
    "propagator_table",
    "semigroup_constant",
    "split_velocity",
    "symbol_matrix",
]
