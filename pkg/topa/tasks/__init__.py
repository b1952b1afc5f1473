"""Batch jobs: Monte-Carlo benchmark replicas."""

from topa.tasks.bench import (
    format_table,
    method_labels,
    run_bench,
    run_replica,
    summarize,
    window_sweep_micros,
)

__all__ = [
    "format_table",
    "method_labels",
    "run_bench",
    "run_replica",
    "summarize",
    "window_sweep_micros",
]
