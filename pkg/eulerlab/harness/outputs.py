"""
Artifacts of one run under <output_dir>/<kind>_<seed>/: series_*.csv,
report.json, meta.json and optionally the trajectory.
"""

import json
import os
from typing import Dict, List, Optional

from loguru import logger

from ..config.config import ExperimentConfig
from ..integrator.trajectory import Trajectory
from ..models import FORMAT_VERSION, ExperimentReport, RunMeta, report_to_json
from ..spectral.snapshot import fmt

SERIES_FOR_QUANTITY = {
    "linear_norm_s": "norms",
    "norm_s1": "norms",
    "part_norm_s1": "frame",
    "slaving_ratio": "frame",
}


def _config_line(config: ExperimentConfig) -> str:
    return json.dumps(config.model_dump(), sort_keys=True, separators=(",", ":"))


def series_lines(name: str, columns: Dict[str, List[float]], config: ExperimentConfig) -> List[str]:
    """gnuplot-compatible CSV: '#' header lines, then comma-separated 17-digit values."""
    lines = [
        f"# format_version={FORMAT_VERSION}",
        f"# series={name} kind={config.kind} seed={config.seed}",
        f"# config={_config_line(config)}",
        "# " + ",".join(columns),
    ]
    for row in zip(*columns.values()):
        lines.append(",".join(fmt(float(value)) for value in row))
    return lines


def write_outputs(report: ExperimentReport, trajectory: Optional[Trajectory], config: ExperimentConfig) -> List[str]:
    """
    Write every artifact of a run; the directory is created if missing.

    Returns:
        Paths written, in a fixed order
    """
    run_dir = config.run_dir
    os.makedirs(run_dir, exist_ok=True)
    paths = []

    for name, columns in report.series.items():
        path = os.path.join(run_dir, f"series_{name}.csv")
        with open(path, "w", encoding="utf-8") as f:
            f.write("\n".join(series_lines(name, columns, config)) + "\n")
        paths.append(path)

    for decay in report.decay_reports:
        series = SERIES_FOR_QUANTITY.get(decay.quantity_name)
        if series in report.series:
            decay.series_csv_path = f"series_{series}.csv"

    report_path = os.path.join(run_dir, "report.json")
    with open(report_path, "w", encoding="utf-8") as f:
        f.write(report_to_json(report) + "\n")
    paths.append(report_path)

    if trajectory is not None and config.save_trajectory:
        paths.append(trajectory.save(os.path.join(run_dir, "trajectory"), seed=config.seed))

    meta = RunMeta(
        kind=config.kind,
        seed=config.seed,
        config=config.model_dump(),
        files=[os.path.basename(p) for p in paths],
        passed=report.passed,
    )
    meta_path = os.path.join(run_dir, "meta.json")
    with open(meta_path, "w", encoding="utf-8") as f:
        json.dump(meta.model_dump(), f, indent=2, sort_keys=True)
        f.write("\n")
    paths.append(meta_path)
    logger.info(f"Wrote {len(paths)} artifacts to {run_dir}")
    return paths
