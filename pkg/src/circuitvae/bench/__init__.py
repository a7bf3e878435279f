"""Experiment harness: dataset generation, training, evaluation, reports."""
from .config import ExperimentConfig, build_config
from .pipeline import CSV_HEADER, ResultRow, baseline_row, cmd_baseline, cmd_eval, cmd_generate, cmd_train, read_csv, write_csv
from .report import summary_by_gates, summary_by_size, summary_by_variant, summary_selected, write_report

__all__ = [
    "CSV_HEADER",
    "ExperimentConfig",
    "ResultRow",
    "baseline_row",
    "build_config",
    "cmd_baseline",
    "cmd_eval",
    "cmd_generate",
    "cmd_train",
    "read_csv",
    "summary_by_gates",
    "summary_by_size",
    "summary_by_variant",
    "summary_selected",
    "write_csv",
    "write_report",
]
