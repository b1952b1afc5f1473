"""Pydantic schemas for the toolkit's domain types."""

from topa.schemas.aaw import AAWConfig, WeightVector
from topa.schemas.hyperparams import ARParams, ARSpec, CoreUpdateMode, Hyperparams
from topa.schemas.record import TTSRecord
from topa.schemas.report import BenchReport, MethodSummary, RunReport
from topa.schemas.state import PredictorState
from topa.schemas.stream import StreamConfig, StreamMethod
from topa.schemas.synth import SynthConfig
from topa.schemas.tensor import DenseMatrix, DenseTensor, ScalarField

__all__ = [
    "AAWConfig",
    "ARParams",
    "ARSpec",
    "BenchReport",
    "CoreUpdateMode",
    "DenseMatrix",
    "DenseTensor",
    "Hyperparams",
    "MethodSummary",
    "PredictorState",
    "RunReport",
    "ScalarField",
    "StreamConfig",
    "StreamMethod",
    "SynthConfig",
    "TTSRecord",
    "WeightVector",
]
