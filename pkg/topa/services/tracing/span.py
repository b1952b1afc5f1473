"""Span record captured by the @traced decorator."""

from typing import Any
from uuid import UUID

from pydantic import BaseModel, Field


class Span(BaseModel):
    """One traced function call.

    Spans are grouped by correlation_id; all spans of one streaming run share it.
    """

    correlation_id: UUID
    sequence_number: int
    function_name: str
    module_path: str
    trace_type: str = "service"
    run_label: str | None = None
    input_summary: dict[str, Any] = Field(default_factory=dict)
    output_summary: dict[str, Any] = Field(default_factory=dict)
    duration_us: int
    is_error: bool = False
    error_type: str | None = None
    error_message: str | None = None


def total_micros_by_function(spans: list[Span]) -> dict[str, int]:
    """Sum span durations per function name."""
    totals: dict[str, int] = {}
    for span in spans:
        totals[span.function_name] = totals.get(span.function_name, 0) + span.duration_us
    return totals
