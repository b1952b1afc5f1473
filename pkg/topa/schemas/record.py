"""Pydantic schema for an ordered series of same-shape tensors."""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from topa.schemas.tensor import DenseTensor, ScalarField


class TTSRecord(BaseModel):
    """Tensor time series X_1..X_T, the unit of file I/O."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    dims: tuple[int, ...] = Field(..., min_length=1, max_length=8)
    field: ScalarField = ScalarField.REAL
    tensors: list[DenseTensor] = Field(default_factory=list)
    timestamps: list[float] | None = None

    @model_validator(mode="after")
    def _check_payloads(self) -> "TTSRecord":
        dtype = self.field.dtype
        for i, x in enumerate(self.tensors):
            if tuple(x.shape) != self.dims:
                raise ValueError(f"tensor {i} has shape {x.shape}, expected {self.dims}")
            if x.dtype != dtype:
                raise ValueError(f"tensor {i} has dtype {x.dtype}, expected {dtype}")
        if self.timestamps is not None and len(self.timestamps) != len(self.tensors):
            raise ValueError("timestamps must have one entry per tensor")
        return self

    @property
    def t(self) -> int:
        """Series length T."""
        return len(self.tensors)

    @classmethod
    def from_arrays(
        cls, tensors: list[Any], timestamps: list[float] | None = None
    ) -> "TTSRecord":
        """Build a record, inferring dims and field from the first tensor."""
        if not tensors:
            raise ValueError("cannot infer dims from an empty series")
        field = ScalarField.COMPLEX if any(np.iscomplexobj(x) for x in tensors) else ScalarField.REAL
        arrays = [np.ascontiguousarray(x, dtype=field.dtype) for x in tensors]
        return cls(
            dims=tuple(arrays[0].shape),
            field=field,
            tensors=arrays,
            timestamps=timestamps,
        )

    def head(self, n: int) -> "TTSRecord":
        """First n tensors as a new record."""
        stamps = self.timestamps[:n] if self.timestamps is not None else None
        return TTSRecord(dims=self.dims, field=self.field, tensors=self.tensors[:n], timestamps=stamps)
