"""Streaming runs: Stage I on a starting series, then one-step-ahead prediction.

Each arriving tensor is scored against the forecast made before it was
ingested. A step's wall time covers the update and the next forecast; the
forecast after Stage I is not timed.
"""

import logging

import numpy as np

from topa.schemas.aaw import AAWConfig
from topa.schemas.hyperparams import Hyperparams
from topa.schemas.record import TTSRecord
from topa.schemas.report import RunReport
from topa.schemas.state import PredictorState
from topa.schemas.stream import StreamConfig, StreamMethod
from topa.schemas.tensor import DenseTensor
from topa.services.aaw import aaw_ingest_and_update, next_weights
from topa.services.engine import (
    check_feasible,
    ingest_and_update,
    offline_refit_step,
    predict_next,
    project_and_append,
    stage1_fit,
)
from topa.services.metrics import nrmse
from topa.services.regression import SeriesTooShortError
from topa.services.tracing import (
    clear_trace_context,
    collect_spans,
    start_trace_context,
    timed,
    total_micros_by_function,
)

logger = logging.getLogger(__name__)

Step = tuple[PredictorState, DenseTensor, float | None]


def _online_step(state: PredictorState, x: DenseTensor, hyper: Hyperparams) -> Step:
    state = ingest_and_update(state, x, hyper)
    return state, predict_next(state, hyper), None


def _aaw_step(state: PredictorState, x: DenseTensor, hyper: Hyperparams, cfg: AAWConfig) -> Step:
    weights = next_weights(state, cfg)
    state = aaw_ingest_and_update(state, x, hyper, cfg, weights_override=weights)
    return state, predict_next(state, hyper), float(np.mean(weights.weights))


def _init_step(state: PredictorState, x: DenseTensor, hyper: Hyperparams) -> Step:
    state = project_and_append(state, x)
    return state, predict_next(state, hyper), None


def _refit_step(record: TTSRecord, k: int, hyper: Hyperparams, seed: int) -> Step:
    state, prediction = offline_refit_step(record.head(k + 1), hyper, seed)
    return state, prediction, None


def run_stream(record: TTSRecord, cfg: StreamConfig) -> tuple[RunReport, PredictorState]:
    """Run one method over ``record`` and report per-step NRMSE and wall time.

    Args:
        record: Full series; the first ``cfg.t0`` tensors form the starting series
        cfg: Method, Stage-I length, seed and hyperparameters

    Returns:
        The run report and the final predictor state

    Raises:
        SeriesTooShortError: If no tensor remains after the starting series
        InfeasibleRanksError: If the ranks do not fit the record's dims
    """
    if record.t <= cfg.t0:
        raise SeriesTooShortError(
            f"series of length {record.t} leaves no streaming steps after t0={cfg.t0}"
        )
    hyper = cfg.hyper
    check_feasible(record.dims, hyper)

    start_trace_context(run_label=f"{cfg.method.value} seed={cfg.seed}")
    try:
        state = stage1_fit(record.head(cfg.t0), hyper, cfg.seed)
        prediction = predict_next(state, hyper)

        errors: list[float] = []
        micros: list[int] = []
        weights: list[float] = []
        for k in range(cfg.t0, record.t):
            x = record.tensors[k]
            errors.append(nrmse(prediction, x))

            if cfg.method is StreamMethod.TOPA:
                step, us = timed(lambda: _online_step(state, x, hyper))
            elif cfg.method is StreamMethod.TOPA_AAW:
                assert cfg.aaw is not None
                aaw = cfg.aaw
                step, us = timed(lambda: _aaw_step(state, x, hyper, aaw))
            elif cfg.method is StreamMethod.TOPA_INIT:
                step, us = timed(lambda: _init_step(state, x, hyper))
            else:
                step, us = timed(lambda: _refit_step(record, k, hyper, cfg.seed))

            state, prediction, mean_weight = step
            micros.append(us)
            if mean_weight is not None:
                weights.append(mean_weight)
            logger.debug("step t=%d nrmse=%.4e micros=%d", k + 1, errors[-1], us)

        phases = total_micros_by_function(collect_spans())
    finally:
        clear_trace_context()

    report = RunReport.from_steps(
        method=cfg.method.value,
        seed=cfg.seed,
        nrmse=errors,
        micros=micros,
        config=cfg.model_dump(mode="json"),
        weights=weights or None,
        phase_micros=phases,
    )
    logger.info(
        "%s seed=%d: %d steps, mean nrmse=%.4f, mean step=%.0f us",
        report.method,
        report.seed,
        len(errors),
        report.mean_nrmse,
        report.mean_micros,
    )
    return report, state
