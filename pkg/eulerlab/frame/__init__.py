"""
Moving-frame functionals (L1, L2), decomposition and conjugated dynamics.
"""

from .decomposition import (
    DecomposedState,
    c_rate,
    conjugated_rhs,
    decompose_state,
    frame_rate,
    frame_residual,
    inverse_lift,
    lift,
    random_probes,
)
from .functionals import FrameFunctionals, assemble_frame_system, frame_modes, solve_frame, solve_frames

__all__ = [
    "DecomposedState",
    "FrameFunctionals",
    "assemble_frame_system",
    "c_rate",
    "conjugated_rhs",
    "decompose_state",
    "frame_modes",
    "frame_rate",
    "frame_residual",
    "inverse_lift",
    "lift",
    "random_probes",
    "solve_frame",
    "solve_frames",
]
