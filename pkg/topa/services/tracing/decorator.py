"""The @traced decorator and the ``timed`` helper.

Usage:
    @traced
    def my_function(arg1, arg2):
        ...

    @traced(capture_args=["hyper"])  # Only capture specific args
    def ingest_and_update(state, x_new, hyper):
        ...

    result, micros = timed(lambda: predict_next(state, hyper))
"""

import functools
import time
from collections.abc import Callable
from typing import Any, ParamSpec, TypeVar

from topa.services.tracing.context import (
    add_pending_span,
    get_correlation_id,
    get_next_sequence_number,
    get_run_label,
)
from topa.services.tracing.sanitize import build_input_summary, build_output_summary
from topa.services.tracing.span import Span

P = ParamSpec("P")
T = TypeVar("T")


def timed(fn: Callable[[], T]) -> tuple[T, int]:
    """Run ``fn`` and return its result with the elapsed wall time in microseconds.

    Uses the monotonic ``perf_counter_ns`` clock; callers keep I/O outside ``fn``.
    """
    start = time.perf_counter_ns()
    result = fn()
    return result, (time.perf_counter_ns() - start) // 1000


def traced(
    func: Callable[P, T] | None = None,
    *,
    trace_type: str = "service",
    capture_args: list[str] | None = None,
) -> Any:
    """Decorator to trace function calls.

    Can be used with or without arguments:
        @traced
        def func(): ...

        @traced(capture_args=["hyper"])
        def func(state, hyper): ...

    Args:
        func: The function to decorate (when used without parentheses)
        trace_type: Free-form category of the span
        capture_args: List of argument names to capture (None = all)

    Returns:
        Decorated function that records a span when a trace context is active
    """

    def decorator(fn: Callable[P, T]) -> Callable[P, T]:
        @functools.wraps(fn)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> T:
            corr_id = get_correlation_id()

            # No trace context - just run the function
            if corr_id is None:
                return fn(*args, **kwargs)

            input_summary = build_input_summary(fn, args, kwargs, capture_args)
            seq = get_next_sequence_number()

            start = time.perf_counter_ns()
            error_info: tuple[str, str] | None = None
            output_summary: dict[str, Any] = {}

            try:
                result = fn(*args, **kwargs)
                output_summary = build_output_summary(result)
                return result
            except Exception as e:
                error_info = (type(e).__name__, str(e)[:500])
                raise
            finally:
                duration_us = (time.perf_counter_ns() - start) // 1000
                add_pending_span(
                    Span(
                        correlation_id=corr_id,
                        sequence_number=seq,
                        function_name=fn.__name__,
                        module_path=fn.__module__,
                        trace_type=trace_type,
                        run_label=get_run_label(),
                        input_summary=input_summary,
                        output_summary=output_summary,
                        duration_us=duration_us,
                        is_error=error_info is not None,
                        error_type=error_info[0] if error_info else None,
                        error_message=error_info[1] if error_info else None,
                    )
                )

        return wrapper

    # Handle both @traced and @traced() syntax
    if func is not None:
        return decorator(func)
    return decorator
