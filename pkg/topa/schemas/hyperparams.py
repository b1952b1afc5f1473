"""Pydantic schemas for regression specs and optimizer hyperparameters."""

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from topa.config import get_settings
from topa.schemas.tensor import DenseTensor


class ARSpec(BaseModel):
    """AR(p) model on the d-times differenced core series."""

    model_config = ConfigDict(frozen=True)

    p: int = Field(1, ge=1, description="Regression order")
    d: int = Field(0, ge=0, le=2, description="Differencing order")

    @property
    def lag(self) -> int:
        """Number of past cores a one-step forecast depends on (p + d)."""
        return self.p + self.d


class ARParams(BaseModel):
    """AR coefficient vector alpha (field matches the core tensors)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    alpha: DenseTensor

    @field_validator("alpha", mode="before")
    @classmethod
    def _as_vector(cls, value: object) -> DenseTensor:
        arr = np.asarray(value)
        if not np.iscomplexobj(arr):
            arr = arr.astype(np.float64)
        else:
            arr = arr.astype(np.complex128)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("alpha must be a non-empty vector")
        if not np.all(np.isfinite(arr)):
            raise ValueError("alpha must have finite entries")
        return arr

    @property
    def p(self) -> int:
        """Regression order implied by the vector length."""
        return int(self.alpha.shape[0])

    @classmethod
    def zeros(cls, p: int, complex_field: bool = False) -> "ARParams":
        """All-zero coefficients of order p."""
        return cls(alpha=np.zeros(p, dtype=np.complex128 if complex_field else np.float64))


class CoreUpdateMode(str, Enum):
    """How the core-tensor block is updated."""

    # Projection-form objective and its closed-form core update
    PAPER_FORM = "paper"
    # Exact minimizer of the single-core block subproblem
    EXACT_BLOCK = "exact"


def _settings_default(name: str) -> float:
    return float(getattr(get_settings(), name))


class Hyperparams(BaseModel):
    """Optimizer hyperparameters shared by Stage I and online updating."""

    model_config = ConfigDict(frozen=True)

    ranks: tuple[int, ...] = Field(..., min_length=1, max_length=8)
    spec: ARSpec = Field(default_factory=ARSpec)
    varphi: float = Field(
        default_factory=lambda: _settings_default("default_varphi"),
        gt=0,
        description="Decomposition regularizer",
    )
    lam: float = Field(
        default_factory=lambda: _settings_default("default_lambda"),
        ge=0,
        description="Proximal step size lambda",
    )
    eps: float = Field(
        default_factory=lambda: _settings_default("default_eps"),
        gt=0,
        description="Squared-change stopping tolerance",
    )
    max_iter_stage1: int = Field(
        default_factory=lambda: int(_settings_default("default_max_iter_stage1")), ge=1
    )
    iters_online: int = Field(
        default_factory=lambda: int(_settings_default("default_iters_online")), ge=1
    )
    core_update_mode: CoreUpdateMode = CoreUpdateMode.PAPER_FORM

    @field_validator("ranks")
    @classmethod
    def _positive_ranks(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if any(r < 1 for r in value):
            raise ValueError("ranks must be positive")
        return value

    @property
    def order(self) -> int:
        """Tensor order M."""
        return len(self.ranks)
