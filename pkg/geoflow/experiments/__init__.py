"""Experiment configuration, task registry, exports and the acceptance suite."""

from geoflow.experiments.config import ExperimentConfig, load_config
from geoflow.experiments.export import CSV_SCHEMAS, SCHEMA_VERSION, ExperimentResult, write_csv, write_json
from geoflow.experiments.runner import execute, run, run_from
from geoflow.experiments.tasks import TASKS

__all__ = [
    "CSV_SCHEMAS",
    "SCHEMA_VERSION",
    "TASKS",
    "ExperimentConfig",
    "ExperimentResult",
    "execute",
    "load_config",
    "run",
    "run_from",
    "write_csv",
    "write_json",
]
