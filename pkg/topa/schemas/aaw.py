"""Pydantic schemas for automatically adaptive weights (AAW)."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from topa.schemas.tensor import DenseTensor


class AAWConfig(BaseModel):
    """Sliding-window length and weight shaping parameters."""

    model_config = ConfigDict(frozen=True)

    tau: int = Field(20, ge=2, description="Window length")
    alpha_damp: float = Field(0.9, gt=0, lt=1, description="Staleness damping")
    beta: float = Field(0.6, gt=0, lt=1, description="Residual-factor floor")


class WeightVector(BaseModel):
    """Per-time weights over a window, newest entry last.

    ``start`` is the 1-based time index of the first weight, so
    ``weights[k]`` belongs to time ``start + k``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    start: int = Field(..., ge=1)
    weights: DenseTensor

    @field_validator("weights", mode="before")
    @classmethod
    def _check_range(cls, value: object) -> DenseTensor:
        arr = np.asarray(value, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("weights must be a non-empty vector")
        if np.any(arr <= 0) or np.any(arr > 1):
            raise ValueError("weights must lie in (0, 1]")
        return arr

    def __len__(self) -> int:
        return int(self.weights.shape[0])

    @classmethod
    def ones(cls, start: int, length: int) -> "WeightVector":
        """Uniform unit weights (plain windowed TOPA)."""
        return cls(start=start, weights=np.ones(length))
