"""Output formatting module."""

from .console import (
    console,
    err_console,
    print_dataset_summary,
    print_metrics,
    print_posterior,
    print_qfi,
    print_restart_summary,
    print_separability,
    print_spread,
    print_trace_summary,
    print_train_summary,
)
from .csv_writer import column_floats, read_csv, write_csv
from .json_formatter import print_json, to_json

__all__ = [
    "console",
    "err_console",
    "print_dataset_summary",
    "print_metrics",
    "print_posterior",
    "print_qfi",
    "print_restart_summary",
    "print_separability",
    "print_spread",
    "print_trace_summary",
    "print_train_summary",
    "column_floats",
    "read_csv",
    "write_csv",
    "print_json",
    "to_json",
]
