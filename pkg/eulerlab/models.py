"""
Report models written to report.json and meta.json.
"""

import json
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

FORMAT_VERSION = "eulerlab-report-1"


class DecayReport(BaseModel):
    """Fitted exponential rate of a positive time series"""
    quantity_name: str
    times: List[float] = Field(default_factory=list)
    values: List[float] = Field(default_factory=list)
    fitted_rate: Optional[float] = None
    fitted_prefactor: Optional[float] = None
    fit_window: Optional[Tuple[float, float]] = None
    residual_of_fit: Optional[float] = None
    K_measured: Optional[float] = None
    constants: Dict[str, float] = Field(default_factory=dict)  # other measured constants, e.g. the slaving C
    series_csv_path: Optional[str] = None

    def summary(self) -> Dict:
        """The compact JSON form: quantity, rate, prefactor, window, residual, series path."""
        out = {
            "quantity": self.quantity_name,
            "rate": self.fitted_rate,
            "prefactor": self.fitted_prefactor,
            "window": list(self.fit_window) if self.fit_window else None,
            "residual": self.residual_of_fit,
            "series_csv_path": self.series_csv_path,
        }
        if self.K_measured is not None:
            out["K_measured"] = self.K_measured
        if self.constants:
            out["constants"] = dict(self.constants)
        return out


class CheckResult(BaseModel):
    """One acceptance check: measured value against a threshold"""
    name: str
    value: Optional[float] = None
    threshold: Optional[float] = None
    comparison: str = "<"
    passed: bool
    detail: str = ""


class ExperimentReport(BaseModel):
    """Everything an experiment measured"""
    format_version: str = FORMAT_VERSION
    kind: str
    seed: int
    config: Dict
    decay_reports: List[DecayReport] = Field(default_factory=list)
    checks: List[CheckResult] = Field(default_factory=list)
    measurements: Dict[str, float] = Field(default_factory=dict)
    contraction_factors: List[float] = Field(default_factory=list)
    series: Dict[str, Dict[str, List[float]]] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[Dict]:
        return [check.model_dump() for check in self.checks if not check.passed]


class RunMeta(BaseModel):
    """Metadata embedded next to every artifact"""
    format_version: str = FORMAT_VERSION
    kind: str
    seed: int
    config: Dict
    files: List[str] = Field(default_factory=list)
    passed: bool


def report_to_json(report: ExperimentReport) -> str:
    """report.json content: decay reports in their compact form plus checks and measurements."""
    payload = {
        "format_version": report.format_version,
        "kind": report.kind,
        "seed": report.seed,
        "config": report.config,
        "passed": report.passed,
        "decay_reports": [r.summary() for r in report.decay_reports],
        "measurements": report.measurements,
        "contraction_factors": report.contraction_factors,
        "checks": [c.model_dump() for c in report.checks],
    }
    return json.dumps(payload, indent=2, sort_keys=True)
