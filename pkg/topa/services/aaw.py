"""Automatically adaptive weights and the sliding-window online update (TOPA-AAW)."""

import logging
from collections.abc import Sequence

import numpy as np

from topa.schemas.aaw import AAWConfig, WeightVector
from topa.schemas.hyperparams import Hyperparams
from topa.schemas.state import PredictorState
from topa.schemas.tensor import DenseMatrix, DenseTensor
from topa.services.engine import extend_state, objective, run_iterations
from topa.services.tensor_core import ZeroNormTensorError, frob_norm_sq, multi_project
from topa.services.tracing import traced

logger = logging.getLogger(__name__)


def residual_eps(x: DenseTensor, g: DenseTensor, us: Sequence[DenseMatrix]) -> float:
    """Relative decomposition residual ``||X - G ×U||^2 / ||X||^2``."""
    denom = frob_norm_sq(x)
    if denom == 0.0:
        raise ZeroNormTensorError("residual ratio undefined for a zero tensor")
    return frob_norm_sq(x - multi_project(g, us, conjugate=False)) / denom


def compute_weights(
    cfg: AAWConfig, t_new: int, residuals: Sequence[float | None]
) -> WeightVector:
    """Weights for times ``t_new - len(residuals) .. t_new``.

    ``residuals[k]`` is the residual of time ``t_new - len(residuals) + k``;
    ``None`` marks a zero-norm observation and counts as residual 1. The window
    interior holds at most ``tau - 1`` times, and the newest time gets weight 1.
    """
    if len(residuals) > cfg.tau - 1:
        raise ValueError(f"{len(residuals)} residuals for a window of length {cfg.tau}")
    start = t_new - len(residuals)
    window_origin = t_new - cfg.tau  # T - tau + 1 with T = t_new - 1
    weights = []
    for k, eps in enumerate(residuals):
        t = start + k
        quality = max(cfg.beta, 1.0 - (1.0 if eps is None else eps))
        weights.append((1.0 - cfg.alpha_damp ** (t - window_origin)) * quality)
    weights.append(1.0)
    return WeightVector(start=start, weights=np.asarray(weights))


def window_residuals(state: PredictorState, count: int) -> list[float | None]:
    """Residuals of the newest ``count`` entries under the state's current fit."""
    out: list[float | None] = []
    for pos in range(len(state.history) - count, len(state.history)):
        try:
            out.append(residual_eps(state.history[pos], state.cores[pos], state.us))
        except ZeroNormTensorError:
            logger.warning(
                "zero-norm observation at t=%d; using the weight floor",
                state.t - len(state.history) + 1 + pos,
            )
            out.append(None)
    return out


def next_weights(state: PredictorState, cfg: AAWConfig) -> WeightVector:
    """Weights for the window ending at the next arrival, from the current fit."""
    n_interior = min(cfg.tau - 1, len(state.history))
    return compute_weights(cfg, state.t + 1, window_residuals(state, n_interior))


def slide_window(state: PredictorState, window: int, context: int) -> PredictorState:
    """Keep the newest ``window`` entries active and up to ``context`` older ones frozen."""
    n = len(state.cores)
    window = min(window, n)
    frozen = min(context, n - window)
    keep = n - window - frozen
    return state.model_copy(
        update={
            "cores": state.cores[keep:],
            "history": state.history[keep:],
            "frozen": frozen,
        }
    )


@traced(capture_args=["hyper", "cfg"])
def aaw_ingest_and_update(
    state: PredictorState,
    x_new: DenseTensor,
    hyper: Hyperparams,
    cfg: AAWConfig,
    weights_override: WeightVector | None = None,
) -> PredictorState:
    """Sliding-window online update with adaptive weights.

    Residuals come from the previous fit; cores preceding the window are kept
    frozen as AR context for the first ``p + d`` window entries.
    """
    if cfg.tau <= hyper.spec.lag:
        raise ValueError(f"tau={cfg.tau} must exceed p + d = {hyper.spec.lag}")
    weights = weights_override
    if weights is None:
        weights = next_weights(state, cfg)

    extended = extend_state(state, x_new, hyper, weight=float(weights.weights[-1]))
    windowed = slide_window(extended, len(weights), hyper.spec.lag)
    windowed.aaw = cfg
    windowed.objective = objective(windowed, hyper, weights)
    logger.debug(
        "aaw window t=%d..%d frozen=%d min_weight=%.3f",
        weights.start,
        windowed.t,
        windowed.frozen,
        float(weights.weights.min()),
    )
    return run_iterations(windowed, hyper, hyper.iters_online, weights)
