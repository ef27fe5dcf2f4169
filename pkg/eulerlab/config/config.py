"""
Experiment configuration: defaults, JSON/TOML files and flag overrides.
"""

import json
import os
from typing import Any, Dict, List, Literal, Optional

import toml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..errors import ConfigError

KINDS = (
    "linear-decay",
    "nonlinear-decay",
    "frame-tracking",
    "commutator-study",
    "picard-study",
    "convergence-study",
    "dissipativity-study",
)

Kind = Literal[
    "linear-decay",
    "nonlinear-decay",
    "frame-tracking",
    "commutator-study",
    "picard-study",
    "convergence-study",
    "dissipativity-study",
]


class Thresholds(BaseModel):
    """Pass/fail limits of the acceptance checks"""
    model_config = ConfigDict(extra="forbid")

    linear_rate_rtol: float = 0.05
    K_refinement_rtol: float = 0.01
    decay_rate_min: float = 0.25
    mass_rtol: float = 1e-10
    slaving_max: float = 10.0
    c_rate_rtol: float = 1e-2
    tangent_rtol: float = 1e-3
    frame_residual_max: float = 1e-8
    commutator_spread_max: float = 3.0
    constant_commutator_max: float = 1e-12
    dissipativity_spread_max: float = 10.0
    picard_factor_max: float = 1.0
    picard_small_factor_max: float = 0.5
    higher_norm_growth_max: float = 2.718281828459045
    convergence_order_min: float = 3.5
    linear_step_max: float = 1e-13


def get_default_config() -> Dict[str, Any]:
    """Get default configuration"""
    return {
        "kind": "nonlinear-decay",
        "dim": 2,
        "N": 32,
        "s": 2.0,
        "gamma": 1.4,
        "amplitude": 1e-2,
        "T_end": 20.0,
        "dt": 1e-2,
        "seed": 0,
        "K_frame": None,  # 8 for dim <= 2, 4 for dim 3
        "output_dir": "results",
        "record_every": 10,
        "fit_start": None,  # T_end / 4
        "save_trajectory": False,

        # linear-decay
        "linear_T_end": 30.0,

        # frame-tracking
        "fd_dt": 1e-3,
        "fd_checks": 3,

        # picard-study
        "T_window": 0.5,
        "picard_iterations": 4,

        # commutator / dissipativity studies
        "n_samples": 20,
        "n_probes": 8,
        "power_iterations": 30,
        "study_N": [16, 32],
        "amplitude_range": [1e-3, 1e-1],

        # convergence-study
        "convergence_dt": [0.02, 0.01, 0.005],
        "convergence_T": 1.0,
        "convergence_amplitude": 1.0,
    }


class ExperimentConfig(BaseModel):
    """Validated experiment configuration"""
    model_config = ConfigDict(extra="forbid")

    kind: Kind = "nonlinear-decay"
    dim: int = Field(2, ge=1, le=3)
    N: int = Field(32, ge=8)
    s: float = 2.0
    gamma: float = Field(1.4, gt=1.0)
    amplitude: float = Field(1e-2, gt=0)
    T_end: float = Field(20.0, gt=0)
    dt: float = Field(1e-2, gt=0)
    seed: int = 0
    K_frame: Optional[int] = Field(None, ge=1)
    output_dir: str = "results"
    record_every: int = Field(10, ge=1)
    fit_start: Optional[float] = Field(None, ge=0)
    save_trajectory: bool = False
    linear_T_end: float = Field(30.0, gt=0)
    fd_dt: float = Field(1e-3, gt=0)
    fd_checks: int = Field(3, ge=1)
    T_window: float = Field(0.5, gt=0)
    picard_iterations: int = Field(4, ge=2)
    n_samples: int = Field(20, ge=2)
    n_probes: int = Field(8, ge=1)
    power_iterations: int = Field(30, ge=1)
    study_N: List[int] = Field(default_factory=lambda: [16, 32])
    amplitude_range: List[float] = Field(default_factory=lambda: [1e-3, 1e-1])
    convergence_dt: List[float] = Field(default_factory=lambda: [0.02, 0.01, 0.005])
    convergence_T: float = Field(1.0, gt=0)
    convergence_amplitude: float = Field(1.0, gt=0)
    thresholds: Thresholds = Field(default_factory=Thresholds)

    @model_validator(mode="after")
    def check_consistency(self) -> "ExperimentConfig":
        errors = []
        if not self.s > self.dim / 2:
            errors.append(f"s: must exceed dim/2 = {self.dim / 2} (got {self.s})")
        if self.N % 2:
            errors.append(f"N: must be even (got {self.N})")
        if len(self.amplitude_range) != 2 or not 0 < self.amplitude_range[0] <= self.amplitude_range[1]:
            errors.append(f"amplitude_range: expected [low, high] with 0 < low <= high (got {self.amplitude_range})")
        if len(self.convergence_dt) != 3 or any(dt <= 0 for dt in self.convergence_dt):
            errors.append(f"convergence_dt: expected three positive steps (got {self.convergence_dt})")
        if any(n % 2 or n < 8 for n in self.study_N):
            errors.append(f"study_N: entries must be even and >= 8 (got {self.study_N})")
        if errors:
            raise ValueError("; ".join(errors))
        return self

    @property
    def frame_truncation(self) -> int:
        if self.K_frame is not None:
            return self.K_frame
        return 4 if self.dim == 3 else 8

    @property
    def fit_window_start(self) -> float:
        return self.T_end / 4.0 if self.fit_start is None else self.fit_start

    @property
    def run_dir(self) -> str:
        return os.path.join(self.output_dir, f"{self.kind}_{self.seed}")


def read_config_file(path: str) -> Dict[str, Any]:
    """Flat keys from a .json or .toml file."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            if path.endswith(".toml"):
                data = toml.load(f)
            else:
                data = json.load(f)
        except (ValueError, toml.TomlDecodeError) as e:
            raise ConfigError(f"cannot parse {path}", [str(e)])
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a table of keys")
    return data


def load_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Merge defaults, an optional file and flag overrides (flags win).

    Raises:
        ConfigError: With one message per invalid field
    """
    values = {k: v for k, v in get_default_config().items() if v is not None}
    if path:
        values.update(read_config_file(path))
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    try:
        return ExperimentConfig(**values)
    except ValidationError as e:
        messages = []
        for error in e.errors():
            location = ".".join(str(part) for part in error["loc"])
            message = error["msg"].removeprefix("Value error, ")
            messages.append(f"{location}: {message}" if location else message)
        raise ConfigError("invalid configuration", messages)
