"""Accuracy metrics for one-step-ahead forecasts."""

import numpy as np
import numpy.typing as npt

from topa.services.tensor_core import TensorShapeError, ZeroNormTensorError, as_tensor, frob_norm


def nrmse(pred: npt.ArrayLike, actual: npt.ArrayLike) -> float:
    """``||pred - actual||_F / ||actual||_F``.

    Computed per step; callers average over the streaming steps.
    """
    pred, actual = as_tensor(pred), as_tensor(actual)
    if pred.shape != actual.shape:
        raise TensorShapeError(f"shape mismatch: {pred.shape} vs {actual.shape}")
    denom = frob_norm(actual)
    if denom == 0.0:
        raise ZeroNormTensorError("NRMSE undefined for a zero-norm target")
    return frob_norm(pred - actual) / denom


def mean_and_stderr(values: list[float]) -> tuple[float, float]:
    """Sample mean and its standard error (0 for a single value)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("no values to aggregate")
    if arr.size == 1:
        return float(arr[0]), 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / np.sqrt(arr.size))
