"""Pydantic schema for synthetic streaming TTS generation."""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from topa.schemas.tensor import ScalarField


class SynthConfig(BaseModel):
    """Configuration of a seeded low-rank (optionally drifting) TTS stream."""

    model_config = ConfigDict(frozen=True)

    dims: tuple[int, ...] = Field((20, 20, 20), min_length=1, max_length=8)
    ranks: tuple[int, ...] = Field((4, 4, 4), min_length=1, max_length=8)
    t: int = Field(70, ge=1, description="Series length T")
    rho: float = Field(0.1, ge=0, description="Noise-to-signal Frobenius ratio")
    core_coeffs: tuple[float, ...] = Field(
        (0.5, -0.3, 0.2), min_length=1, description="AR coefficients of the core recursion"
    )
    core_d: int = Field(1, ge=0, le=2, description="Differencing order of the core recursion")
    drift_angle: float = Field(0.0, ge=0, description="Givens rotation angle per step (radians)")
    field: ScalarField = ScalarField.REAL
    seed: int = 0

    @model_validator(mode="after")
    def _check_shapes(self) -> "SynthConfig":
        if len(self.dims) != len(self.ranks):
            raise ValueError("dims and ranks must have the same length")
        if any(d < 1 for d in self.dims) or any(r < 1 for r in self.ranks):
            raise ValueError("dims and ranks must be positive")
        if any(r > d for r, d in zip(self.ranks, self.dims, strict=True)):
            raise ValueError("ranks must not exceed dims")
        return self
