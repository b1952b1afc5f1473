"""Tests for span collection and the timed helper."""

import time

import numpy as np
import pytest

from topa.schemas import Hyperparams
from topa.services.tracing import (
    clear_trace_context,
    collect_spans,
    get_correlation_id,
    start_trace_context,
    timed,
    total_micros_by_function,
    traced,
)
from topa.services.tracing.sanitize import sanitize_value


@traced
def _double(x):
    return 2 * x


@traced(capture_args=["hyper"])
def _fails(state, hyper):
    raise RuntimeError("boom")


@pytest.fixture
def trace_context():
    """Active trace context, cleared afterwards."""
    start_trace_context(run_label="test")
    yield
    clear_trace_context()


class TestTimed:
    """Tests for timed."""

    def test_noop_non_negative(self):
        """Three no-op calls report micros >= 0."""
        for _ in range(3):
            result, micros = timed(lambda: None)
            assert result is None
            assert micros >= 0

    def test_sleep_sanity(self):
        """A 20 ms sleep measures at least 20 ms and well under a second."""
        _, micros = timed(lambda: time.sleep(0.02))
        assert 20_000 <= micros < 1_000_000

    def test_nesting_adds_up(self):
        """Outer time is the sum of inner times within 10%."""

        def inner_pair():
            (_, a), (_, b) = timed(lambda: time.sleep(0.03)), timed(lambda: time.sleep(0.03))
            return a + b

        inner_total, outer = timed(inner_pair)
        assert abs(outer - inner_total) <= 0.1 * outer


class TestTraced:
    """Tests for the @traced decorator."""

    def test_no_context_is_passthrough(self):
        """Without a trace context nothing is recorded."""
        assert get_correlation_id() is None
        assert _double(3) == 6
        assert collect_spans() == []

    def test_records_span(self, trace_context):
        """A call inside a context records name, module and duration."""
        _double(np.ones(3))
        spans = collect_spans()
        assert len(spans) == 1
        assert spans[0].function_name == "_double"
        assert spans[0].run_label == "test"
        assert spans[0].input_summary["x"]["shape"] == [3]
        assert spans[0].duration_us >= 0

    def test_records_errors(self, trace_context):
        """Exceptions propagate and are recorded on the span."""
        with pytest.raises(RuntimeError):
            _fails(object(), Hyperparams(ranks=(2,)))
        span = collect_spans()[0]
        assert span.is_error
        assert span.error_type == "RuntimeError"
        assert set(span.input_summary) == {"hyper"}

    def test_totals_by_function(self, trace_context):
        """Durations sum per function name."""
        _double(1)
        _double(2)
        totals = total_micros_by_function(collect_spans())
        assert set(totals) == {"_double"}


class TestSanitize:
    """Tests for sanitize_value."""

    def test_array_summary(self):
        """Arrays reduce to shape, dtype and norm."""
        summary = sanitize_value(np.array([3.0, 4.0]))
        assert summary == {"_type": "ndarray", "shape": [2], "dtype": "float64", "norm": 5.0}

    def test_long_list_truncated(self):
        """Lists beyond ten items are truncated."""
        summary = sanitize_value(list(range(25)))
        assert summary["_truncated"] is True
        assert summary["_total"] == 25
        assert len(summary["items"]) == 10

    def test_model_summary(self):
        """Pydantic models summarize their fields."""
        summary = sanitize_value(Hyperparams(ranks=(2, 3)))
        assert summary["_type"] == "Hyperparams"
        assert summary["ranks"] == [2, 3]
