"""Pydantic schemas for streaming and benchmark reports."""

from typing import Any

from pydantic import BaseModel, Field, model_validator


class RunReport(BaseModel):
    """Per-step accuracy and timing of one streaming run."""

    method: str
    seed: int
    label: str = ""
    nrmse_per_step: list[float] = Field(default_factory=list)
    micros_per_step: list[int] = Field(default_factory=list)
    mean_nrmse: float = 0.0
    mean_micros: float = 0.0
    mean_weight_per_step: list[float] | None = None
    phase_micros: dict[str, int] = Field(default_factory=dict)
    config: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_lengths(self) -> "RunReport":
        if len(self.nrmse_per_step) != len(self.micros_per_step):
            raise ValueError("nrmse and timing sequences must have equal length")
        if not self.label:
            self.label = self.method
        return self

    @classmethod
    def from_steps(
        cls,
        method: str,
        seed: int,
        nrmse: list[float],
        micros: list[int],
        config: dict[str, Any] | None = None,
        weights: list[float] | None = None,
        phase_micros: dict[str, int] | None = None,
        label: str = "",
    ) -> "RunReport":
        """Build a report, computing the means from the step sequences."""
        n = len(nrmse)
        return cls(
            method=method,
            seed=seed,
            label=label,
            nrmse_per_step=nrmse,
            micros_per_step=micros,
            mean_nrmse=sum(nrmse) / n if n else 0.0,
            mean_micros=sum(micros) / n if n else 0.0,
            mean_weight_per_step=weights,
            phase_micros=phase_micros or {},
            config=config or {},
        )


class MethodSummary(BaseModel):
    """Aggregate of one compared configuration over Monte-Carlo replicas.

    ``label`` tells apart several configurations of the same method.
    """

    method: str
    label: str = ""
    runs: int
    mean_nrmse: float
    stderr_nrmse: float
    mean_micros: float

    @model_validator(mode="after")
    def _default_label(self) -> "MethodSummary":
        if not self.label:
            self.label = self.method
        return self


class BenchReport(BaseModel):
    """Comparison table over Monte-Carlo replicas."""

    seeds: list[int]
    methods: list[MethodSummary]
    runs: list[RunReport] = Field(default_factory=list)
    config: dict[str, Any] = Field(default_factory=dict)
