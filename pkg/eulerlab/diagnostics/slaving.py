"""
Ratio of the mean coordinate c(t) to the zero-mean part along a trajectory.
"""

from typing import Sequence

import numpy as np

from ..errors import DegenerateDenominator
from ..frame.decomposition import decompose_state
from ..frame.functionals import FrameFunctionals
from ..integrator.trajectory import Trajectory
from ..models import DecayReport


def slaving_series(trajectory: Trajectory, frames: Sequence[FrameFunctionals], s: float = 2.0) -> DecayReport:
    """
    |c(t)| / (||sigma_1(t)||_{s+1} + ||U_1(t)||_{s+1}) at every stored time.

    Times where the zero-mean part vanishes are skipped; the supremum is
    stored as constants["C"].

    Raises:
        DegenerateDenominator: If the zero-mean part vanishes at every time
    """
    if len(frames) != len(trajectory):
        raise ValueError(f"{len(frames)} frames for {len(trajectory)} states")
    times, ratios = [], []
    for t, state, frame in zip(trajectory.times, trajectory.states, frames):
        decomp = decompose_state(state, frame)
        denominator = decomp.part_norm(s + 1)
        if denominator == 0:
            continue
        times.append(float(t))
        ratios.append(abs(decomp.c) / denominator)
    if not ratios:
        raise DegenerateDenominator("zero-mean part vanishes along the whole trajectory")
    return DecayReport(
        quantity_name="slaving_ratio",
        times=times,
        values=ratios,
        constants={"C": float(np.max(ratios))},
    )
