"""Pydantic schemas for streaming runs."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from topa.schemas.aaw import AAWConfig
from topa.schemas.hyperparams import Hyperparams


class StreamMethod(str, Enum):
    """Predictor variants that can be streamed."""

    TOPA = "topa"
    TOPA_AAW = "topa-aaw"
    # Stage-I predictor, never updated afterwards
    TOPA_INIT = "topa-init"
    OFFLINE_REFIT = "offline-refit"


class StreamConfig(BaseModel):
    """Effective configuration of one streaming run; echoed into its report."""

    model_config = ConfigDict(frozen=True)

    method: StreamMethod = StreamMethod.TOPA
    t0: int = Field(20, ge=1, description="Length of the Stage-I starting series")
    seed: int = 0
    hyper: Hyperparams
    aaw: AAWConfig | None = None

    @model_validator(mode="after")
    def _check_window(self) -> "StreamConfig":
        if self.method is StreamMethod.TOPA_AAW and self.aaw is None:
            raise ValueError("method topa-aaw needs an AAW configuration")
        if self.aaw is not None and self.aaw.tau <= self.hyper.spec.lag:
            raise ValueError(
                f"tau={self.aaw.tau} must exceed p + d = {self.hyper.spec.lag}"
            )
        return self
