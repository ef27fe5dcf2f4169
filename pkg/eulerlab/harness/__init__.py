"""
Experiment driver: named kinds, acceptance checks and on-disk artifacts.
"""

from .experiments import RUNNERS, ExperimentOutcome, check, run_experiment
from .outputs import series_lines, write_outputs

__all__ = ["RUNNERS", "ExperimentOutcome", "check", "run_experiment", "series_lines", "write_outputs"]
