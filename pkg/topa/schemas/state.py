"""Pydantic schema for the predictor state h_T."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from topa.schemas.aaw import AAWConfig
from topa.schemas.hyperparams import ARParams
from topa.schemas.tensor import DenseMatrix, DenseTensor

ORTHONORMALITY_TOL = 1e-8


class PredictorState(BaseModel):
    """Joint projections, core series, AR parameters and retained history.

    ``history[k]`` and ``cores[k]`` belong to time ``t - len(history) + 1 + k``.
    The first ``frozen`` entries are regression context only: they take no part
    in the decomposition term and are never updated (sliding-window runs).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    us: list[DenseMatrix]
    cores: list[DenseTensor]
    params: ARParams
    history: list[DenseTensor]
    t: int = Field(..., ge=1, description="Time index of the newest observation")
    frozen: int = Field(0, ge=0)
    objective: float = 0.0
    objective_trace: list[float] = Field(default_factory=list)
    iterations: int = 0
    aaw: AAWConfig | None = None

    @model_validator(mode="after")
    def _check_consistency(self) -> "PredictorState":
        if len(self.cores) != len(self.history):
            raise ValueError("cores and history must have the same length")
        if self.frozen > len(self.cores):
            raise ValueError("frozen prefix longer than the retained series")
        ranks = tuple(u.shape[1] for u in self.us)
        dims = tuple(u.shape[0] for u in self.us)
        for g, x in zip(self.cores, self.history, strict=True):
            if tuple(g.shape) != ranks:
                raise ValueError(f"core shape {g.shape} does not match ranks {ranks}")
            if tuple(x.shape) != dims:
                raise ValueError(f"history shape {x.shape} does not match dims {dims}")
        for m, u in enumerate(self.us):
            gram = u.conj().T @ u
            if np.linalg.norm(gram - np.eye(u.shape[1])) > ORTHONORMALITY_TOL:
                raise ValueError(f"projection matrix {m} lost orthonormality")
        return self

    @property
    def ranks(self) -> tuple[int, ...]:
        """Core dims (R_1..R_M)."""
        return tuple(u.shape[1] for u in self.us)

    @property
    def dims(self) -> tuple[int, ...]:
        """Data dims (I_1..I_M)."""
        return tuple(u.shape[0] for u in self.us)

    @property
    def active(self) -> range:
        """Positions of the entries that are optimized."""
        return range(self.frozen, len(self.cores))
