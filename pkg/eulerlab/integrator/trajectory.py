"""
Discrete solution path and its on-disk layout (snapshot files plus meta.json).
"""

import json
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel

from ..dynamics.gas import GasParameters
from ..errors import TimeOutOfRange
from ..spectral.fields import State
from ..spectral.grid import GridSpec, make_grid
from ..spectral.norms import sobolev_norm
from ..spectral.snapshot import read_snapshot, write_snapshot

FORMAT_VERSION = "eulerlab-trajectory-1"
TIME_TOLERANCE = 1e-9


class GridMeta(BaseModel):
    dim: int
    N: int
    dealias_fraction: float


class TrajectoryMeta(BaseModel):
    format_version: str = FORMAT_VERSION
    grid: GridMeta
    gamma: float
    dt: float
    step_dt: float
    seed: Optional[int] = None
    scheme: str = "lawson-rk4"
    times: List[float]
    files: List[List[str]]


def component_names(dim: int) -> List[str]:
    return ["sigma"] + [f"u{i + 1}" for i in range(dim)]


@dataclass(eq=False)
class Trajectory:
    """States on a uniform time lattice starting at 0; dt is the spacing between stored states."""
    grid: GridSpec
    params: GasParameters
    dt: float
    times: np.ndarray
    states: List[State]
    step_dt: Optional[float] = None
    meta: Dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64)
        if self.step_dt is None:
            self.step_dt = self.dt

    def __len__(self) -> int:
        return len(self.states)

    @property
    def T_end(self) -> float:
        return float(self.times[-1])

    def state_at(self, t: float) -> State:
        """Linear interpolation between stored states."""
        if t < -TIME_TOLERANCE or t > self.T_end + TIME_TOLERANCE:
            raise TimeOutOfRange(f"t={t} outside [0, {self.T_end}]")
        if len(self.states) == 1:
            return self.states[0]
        position = min(max(t / self.dt, 0.0), len(self.states) - 1.0)
        lower = min(int(np.floor(position + TIME_TOLERANCE)), len(self.states) - 2)
        weight = position - lower
        if abs(weight) < TIME_TOLERANCE:
            return self.states[lower]
        if abs(weight - 1.0) < TIME_TOLERANCE:
            return self.states[lower + 1]
        return self.states[lower] * (1.0 - weight) + self.states[lower + 1] * weight

    def norms(self, s: float, weight: str = "physical") -> np.ndarray:
        return np.array([sobolev_norm(state, s, weight) for state in self.states])

    def window(self, T_window: float) -> "Trajectory":
        """Prefix covering [0, T_window]."""
        if T_window > self.T_end + TIME_TOLERANCE:
            raise TimeOutOfRange(f"window {T_window} exceeds trajectory end {self.T_end}")
        count = int(round(T_window / self.dt)) + 1
        return Trajectory(self.grid, self.params, self.dt, self.times[:count], self.states[:count], self.step_dt, dict(self.meta))

    def save(self, directory: str, seed: Optional[int] = None) -> str:
        """Write one snapshot per component and time plus meta.json."""
        os.makedirs(directory, exist_ok=True)
        names = component_names(self.grid.dim)
        files = []
        for index, (t, state) in enumerate(zip(self.times, self.states)):
            row = []
            for name, comp in zip(names, state.components()):
                file_name = f"snap_{index:05d}_{name}.txt"
                write_snapshot(os.path.join(directory, file_name), comp, name, float(t))
                row.append(file_name)
            files.append(row)
        meta = TrajectoryMeta(
            grid=GridMeta(dim=self.grid.dim, N=self.grid.N, dealias_fraction=self.grid.dealias_fraction),
            gamma=self.params.gamma,
            dt=self.dt,
            step_dt=self.step_dt,
            seed=seed,
            times=[float(t) for t in self.times],
            files=files,
        )
        with open(os.path.join(directory, "meta.json"), "w", encoding="utf-8") as f:
            json.dump(meta.model_dump(), f, indent=2)
        logger.info(f"Saved trajectory with {len(self.states)} states to {directory}")
        return directory

    @classmethod
    def load(cls, directory: str) -> "Trajectory":
        with open(os.path.join(directory, "meta.json"), "r", encoding="utf-8") as f:
            meta = TrajectoryMeta(**json.load(f))
        grid = make_grid(meta.grid.dim, meta.grid.N, meta.grid.dealias_fraction)
        states = []
        for row in meta.files:
            comps = [read_snapshot(os.path.join(directory, name), grid.dealias_fraction)[0] for name in row]
            states.append(State.from_fields(comps[0], comps[1:]))
        logger.info(f"Loaded trajectory with {len(states)} states from {directory}")
        return cls(grid, GasParameters(gamma=meta.gamma), meta.dt, np.array(meta.times), states, meta.step_dt,
                   {"seed": meta.seed, "scheme": meta.scheme})
