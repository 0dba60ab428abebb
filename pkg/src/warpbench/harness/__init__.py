"""Experiment harness: dataset files, configs, runs, figures and the CLI."""

from .cache import DiskMatrixCache
from .config import ClassifierDirective, ExperimentConfig
from .datasets import DatasetError, parse_dataset, write_dataset
from .runner import ResultsRecord, RunResult, emit_accuracy_csv, run_experiment
from .svg import emit_cd_diagram, emit_histogram, emit_scatter_regression
from .synthetic import generate_synthetic

__all__ = [
    "ClassifierDirective",
    "DatasetError",
    "DiskMatrixCache",
    "ExperimentConfig",
    "ResultsRecord",
    "RunResult",
    "emit_accuracy_csv",
    "emit_cd_diagram",
    "emit_histogram",
    "emit_scatter_regression",
    "generate_synthetic",
    "parse_dataset",
    "run_experiment",
    "write_dataset",
]
