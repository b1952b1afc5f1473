"""Input/output summaries for span data.

Large arrays are reduced to shape, dtype and norm; collections are truncated.
"""

import inspect
from collections.abc import Callable
from typing import Any

import numpy as np

# Maximum string length before truncation
MAX_STRING_LENGTH = 200

# Maximum number of items to show in lists/dicts
MAX_COLLECTION_ITEMS = 10


def sanitize_value(value: Any, depth: int = 0) -> Any:
    """Reduce a value to a small JSON-serializable summary.

    Args:
        value: The value to summarize
        depth: Current recursion depth (to prevent infinite loops)

    Returns:
        A JSON-serializable representation
    """
    if depth > 3:
        return f"<{type(value).__name__}>"

    if value is None or isinstance(value, bool | int):
        return value
    if isinstance(value, float):
        return value if np.isfinite(value) else str(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}

    if isinstance(value, str):
        if len(value) > MAX_STRING_LENGTH:
            return value[:MAX_STRING_LENGTH] + f"... ({len(value)} chars)"
        return value

    if isinstance(value, np.ndarray):
        return {
            "_type": "ndarray",
            "shape": list(value.shape),
            "dtype": str(value.dtype),
            "norm": float(np.linalg.norm(value.ravel())) if value.size else 0.0,
        }
    if isinstance(value, np.generic):
        return sanitize_value(value.item(), depth)

    if isinstance(value, list | tuple):
        items = [sanitize_value(v, depth + 1) for v in value[:MAX_COLLECTION_ITEMS]]
        if len(value) > MAX_COLLECTION_ITEMS:
            return {"_type": type(value).__name__, "_truncated": True, "_total": len(value), "items": items}
        return items

    if isinstance(value, dict):
        result: dict[str, Any] = {}
        for i, (k, v) in enumerate(value.items()):
            if i >= MAX_COLLECTION_ITEMS:
                result["_truncated"] = True
                result["_total"] = len(value)
                break
            result[str(k)] = sanitize_value(v, depth + 1)
        return result

    # Pydantic models: scalar fields only, arrays summarized
    if hasattr(value, "model_dump"):
        fields = dict(list(vars(value).items())[:MAX_COLLECTION_ITEMS])
        return {
            "_type": type(value).__name__,
            **{k: sanitize_value(v, depth + 1) for k, v in fields.items()},
        }

    return f"<{type(value).__name__}>"


def build_input_summary(
    func: Callable[..., Any],
    args: tuple[Any, ...],
    kwargs: dict[str, Any],
    capture_args: list[str] | None = None,
) -> dict[str, Any]:
    """Build a summary of function inputs.

    Args:
        func: The function being called
        args: Positional arguments
        kwargs: Keyword arguments
        capture_args: If specified, only capture these argument names

    Returns:
        A dict mapping argument names to summarized values
    """
    result: dict[str, Any] = {}

    try:
        params = list(inspect.signature(func).parameters.keys())
    except (ValueError, TypeError):
        params = [f"arg_{i}" for i in range(len(args))]

    for i, arg in enumerate(args):
        name = params[i] if i < len(params) else f"arg_{i}"
        if name in ("self", "cls"):
            continue
        if capture_args is None or name in capture_args:
            result[name] = sanitize_value(arg)

    for key, value in kwargs.items():
        if capture_args is None or key in capture_args:
            result[key] = sanitize_value(value)

    return result


def build_output_summary(result: Any) -> dict[str, Any]:
    """Build a summary of a function's return value."""
    if result is None:
        return {"_value": None}

    summary = sanitize_value(result)
    if isinstance(summary, dict):
        return summary
    if isinstance(summary, list):
        return {"_items": summary}
    return {"_value": summary}
