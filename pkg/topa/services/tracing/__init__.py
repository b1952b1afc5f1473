"""Tracing infrastructure: function spans and wall-clock timing.

Usage:
    from topa.services.tracing import traced, start_trace_context, collect_spans

    start_trace_context(run_label="topa seed=7")

    @traced
    def my_function(arg1, arg2):
        ...

    spans = collect_spans()
    clear_trace_context()
"""

from topa.services.tracing.context import (
    clear_trace_context,
    collect_spans,
    get_correlation_id,
    get_run_label,
    start_trace_context,
)
from topa.services.tracing.decorator import timed, traced
from topa.services.tracing.span import Span, total_micros_by_function

__all__ = [
    "Span",
    "clear_trace_context",
    "collect_spans",
    "get_correlation_id",
    "get_run_label",
    "start_trace_context",
    "timed",
    "total_micros_by_function",
    "traced",
]
