from .experiment import (ConfigError, DataBundle, ExperimentConfig, load_data_dir,
                         load_experiment, manifest_checkpoints, read_manifest,
                         train_all)
from .main import main

__all__ = [
    "ConfigError", "DataBundle", "ExperimentConfig", "load_data_dir",
    "load_experiment", "main", "manifest_checkpoints", "read_manifest", "train_all",
]
