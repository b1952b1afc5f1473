"""Trace context management using contextvars.

Context variables propagate through nested calls, so every function decorated
with @traced inside one run is grouped under the same correlation_id.
"""

from contextvars import ContextVar
from typing import TYPE_CHECKING
from uuid import UUID, uuid4

if TYPE_CHECKING:
    from topa.services.tracing.span import Span


_correlation_id: ContextVar[UUID | None] = ContextVar("correlation_id", default=None)
_run_label: ContextVar[str | None] = ContextVar("run_label", default=None)
_sequence_counter: ContextVar[int] = ContextVar("sequence_counter", default=0)
_pending_spans: ContextVar[list["Span"] | None] = ContextVar("pending_spans", default=None)


def start_trace_context(run_label: str | None = None) -> UUID:
    """Initialize trace context at run start. Returns correlation_id.

    Args:
        run_label: Free-form label of the run (method tag, seed, ...)

    Returns:
        The generated correlation_id for this run
    """
    corr_id = uuid4()
    _correlation_id.set(corr_id)
    _run_label.set(run_label)
    _sequence_counter.set(0)
    _pending_spans.set([])
    return corr_id


def get_correlation_id() -> UUID | None:
    """Get the current correlation ID, or None if no trace context."""
    return _correlation_id.get()


def get_run_label() -> str | None:
    """Get the run label from the trace context."""
    return _run_label.get()


def get_next_sequence_number() -> int:
    """Get and increment the sequence counter."""
    seq = _sequence_counter.get()
    _sequence_counter.set(seq + 1)
    return seq


def add_pending_span(span: "Span") -> None:
    """Add a span to the pending list."""
    spans = _pending_spans.get()
    if spans is not None:
        spans.append(span)


def collect_spans() -> list["Span"]:
    """Return all pending spans and reset the pending list."""
    spans = _pending_spans.get()
    if not spans:
        return []
    _pending_spans.set([])
    return spans


def clear_trace_context() -> None:
    """Clear all trace context."""
    _correlation_id.set(None)
    _run_label.set(None)
    _sequence_counter.set(0)
    _pending_spans.set(None)
