from .config import KINDS, ExperimentConfig, Thresholds, get_default_config, load_config, read_config_file

__all__ = ["KINDS", "ExperimentConfig", "Thresholds", "get_default_config", "load_config", "read_config_file"]
