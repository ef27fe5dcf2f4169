"""
Lawson-RK4 time stepping, frozen-coefficient evolution and Picard iteration.
"""

from .evolution import NormRecorder, evolve, frozen_evolve, frozen_path, step_count
from .lawson import LawsonPropagators, autonomous_nonlinearity, lawson_rk4_step
from .picard import PicardOutcome, constant_guess, picard_iterate, picard_map, picard_sequence, z_norm
from .trajectory import Trajectory

__all__ = [
    "LawsonPropagators",
    "NormRecorder",
    "PicardOutcome",
    "Trajectory",
    "autonomous_nonlinearity",
    "constant_guess",
    "evolve",
    "frozen_evolve",
    "frozen_path",
    "lawson_rk4_step",
    "picard_iterate",
    "picard_map",
    "picard_sequence",
    "step_count",
    "z_norm",
]
