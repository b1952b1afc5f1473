"""Joint-Tucker online predictor: objective, proximal block updates, Stage I and online updating.

Block order inside one sweep is fixed: AR parameters, then U_1..U_M
(Gauss-Seidel), then the cores in time order. Positions are 0-based indices
into the retained series; the first ``state.frozen`` entries only provide
regression context.
"""

import logging
from collections.abc import Callable, Sequence

import numpy as np
import numpy.typing as npt

from topa.schemas.aaw import WeightVector
from topa.schemas.hyperparams import ARParams, CoreUpdateMode, Hyperparams
from topa.schemas.record import TTSRecord
from topa.schemas.state import PredictorState
from topa.schemas.tensor import DenseMatrix, DenseTensor
from topa.services.linalg import orthonormalize, procrustes
from topa.services.regression import (
    SeriesTooShortError,
    ar_filter,
    fit_ar,
    forecast,
    one_step_prediction,
    regression_loss,
    regression_residual,
)
from topa.services.tensor_core import (
    TensorShapeError,
    as_tensor,
    frob_norm_sq,
    multi_project,
    project_except,
    unfold,
)
from topa.services.tracing import traced

logger = logging.getLogger(__name__)

IterationCallback = Callable[[PredictorState, PredictorState], None]


class InfeasibleRanksError(ValueError):
    """Ranks incompatible with the data dims."""

    pass


def check_feasible(dims: Sequence[int], hyper: Hyperparams) -> None:
    """Raise unless ``len(ranks) == len(dims)`` and ``R_m <= I_m``."""
    if len(dims) != hyper.order:
        raise InfeasibleRanksError(f"ranks {hyper.ranks} do not match tensor order {len(dims)}")
    if any(r > i for r, i in zip(hyper.ranks, dims, strict=True)):
        raise InfeasibleRanksError(f"ranks {hyper.ranks} exceed dims {tuple(dims)}")


def _weights_for(state: PredictorState, weights: WeightVector | None) -> DenseTensor:
    """Weights aligned with the active entries (ones when absent)."""
    n_active = len(state.cores) - state.frozen
    if weights is None:
        return np.ones(n_active)
    if len(weights) != n_active:
        raise ValueError(f"{len(weights)} weights for {n_active} active entries")
    return weights.weights


def decomposition_residual(
    x: DenseTensor, g: DenseTensor, us: Sequence[DenseMatrix], mode: CoreUpdateMode
) -> float:
    """Squared decomposition residual of one time step.

    The ``paper`` mode measures ``||G - X ×U^H||^2``; ``exact`` measures
    ``||X - G ×U||^2``, under which every block update is an exact minimizer.
    """
    if mode is CoreUpdateMode.PAPER_FORM:
        return frob_norm_sq(g - multi_project(x, us))
    return frob_norm_sq(x - multi_project(g, us, conjugate=False))


def objective(
    state: PredictorState, hyper: Hyperparams, weights: WeightVector | None = None
) -> float:
    """Regression loss plus ``varphi * sum_t w_t * residual_t`` over the active entries."""
    w = _weights_for(state, weights)
    total = regression_loss(state.params, hyper.spec, state.cores)
    for k, pos in enumerate(state.active):
        total += hyper.varphi * w[k] * decomposition_residual(
            state.history[pos], state.cores[pos], state.us, hyper.core_update_mode
        )
    return float(total)


def _projection_update(
    history: Sequence[DenseTensor],
    cores: Sequence[DenseTensor],
    us: Sequence[DenseMatrix],
    m: int,
    hyper: Hyperparams,
    w: DenseTensor,
    frozen: int,
) -> DenseMatrix:
    acc = (hyper.lam / (2.0 * hyper.varphi)) * us[m]
    for k, pos in enumerate(range(frozen, len(cores))):
        h = project_except(history[pos], us, m)
        acc = acc + w[k] * (unfold(h, m) @ unfold(cores[pos], m).conj().T)
    return procrustes(acc)


def update_projection(
    state: PredictorState, hyper: Hyperparams, m: int, weights: WeightVector | None = None
) -> DenseMatrix:
    """Proximal update of ``U_m`` with the other factors held at ``state.us``."""
    if not 0 <= m < len(state.us):
        raise TensorShapeError(f"mode {m} out of range")
    return _projection_update(
        state.history, state.cores, state.us, m, hyper, _weights_for(state, weights), state.frozen
    )


def _core_update(
    cores: Sequence[DenseTensor],
    pos: int,
    projection: DenseTensor,
    weight: float,
    taps: DenseTensor,
    hyper: Hyperparams,
) -> DenseTensor:
    lag = len(taps) - 1
    half_lam = hyper.lam / 2.0
    fw = hyper.varphi * weight
    old = cores[pos]
    if hyper.core_update_mode is CoreUpdateMode.PAPER_FORM:
        if pos < lag:
            return (fw * projection + half_lam * old) / (fw + half_lam)
        f = one_step_prediction(taps, cores, pos)
        return (f + fw * projection + half_lam * old) / (1.0 + fw + half_lam)

    # Exact block: G_t enters the residual at s = t + j with tap phi_j
    coeff = fw + half_lam
    rhs = fw * projection + half_lam * old
    for j in range(lag + 1):
        s = pos + j
        if s < lag or s >= len(cores):
            continue
        # residual at s without its G_t contribution
        rest = regression_residual(taps, cores, s) - taps[j] * old
        coeff += abs(taps[j]) ** 2
        rhs = rhs - np.conj(taps[j]) * rest
    return rhs / coeff


def update_core(
    state: PredictorState, hyper: Hyperparams, t: int, weights: WeightVector | None = None
) -> DenseTensor:
    """Proximal update of the core at 0-based position ``t`` (an active entry)."""
    if t not in state.active:
        raise IndexError(f"position {t} is not an active entry")
    w = _weights_for(state, weights)
    projection = multi_project(state.history[t], state.us)
    taps = ar_filter(state.params, hyper.spec)
    return _core_update(state.cores, t, projection, float(w[t - state.frozen]), taps, hyper)


def update_ar(state: PredictorState, hyper: Hyperparams) -> ARParams:
    """Proximal AR update on the full retained core series."""
    return fit_ar(state.cores, hyper.spec, hyper.lam, state.params)


def sweep(
    state: PredictorState, hyper: Hyperparams, weights: WeightVector | None = None
) -> tuple[PredictorState, float]:
    """One pass of P, U_1..U_M, G_t updates; returns the new state and squared change."""
    w = _weights_for(state, weights)
    params = update_ar(state, hyper)
    change = frob_norm_sq(params.alpha - state.params.alpha)

    us = list(state.us)
    for m in range(len(us)):
        new_u = _projection_update(state.history, state.cores, us, m, hyper, w, state.frozen)
        change += frob_norm_sq(new_u - us[m])
        us[m] = new_u

    taps = ar_filter(params, hyper.spec)
    cores = list(state.cores)
    for k, pos in enumerate(state.active):
        projection = multi_project(state.history[pos], us)
        new_g = _core_update(cores, pos, projection, float(w[k]), taps, hyper)
        change += frob_norm_sq(new_g - cores[pos])
        cores[pos] = new_g

    new_state = state.model_copy(update={"us": us, "cores": cores, "params": params})
    new_state.objective = objective(new_state, hyper, weights)
    return new_state, change


def run_iterations(
    state: PredictorState,
    hyper: Hyperparams,
    max_iter: int,
    weights: WeightVector | None = None,
    on_iteration: IterationCallback | None = None,
) -> PredictorState:
    """Sweep until the squared change drops below ``eps`` or ``max_iter`` is reached."""
    trace = list(state.objective_trace)
    for k in range(max_iter):
        new_state, change = sweep(state, hyper, weights)
        trace.append(new_state.objective)
        logger.debug(
            "iteration %d: objective=%.6e squared_change=%.3e", k + 1, new_state.objective, change
        )
        if on_iteration is not None:
            on_iteration(state, new_state)
        state = new_state
        state.iterations += 1
        if change < hyper.eps:
            logger.debug("converged after %d iterations", k + 1)
            break
    state.objective_trace = trace
    return state


def initial_state(record: TTSRecord, hyper: Hyperparams, seed: int) -> PredictorState:
    """Random orthonormal factors (seeded Gaussian + polar factor) and projected cores."""
    check_feasible(record.dims, hyper)
    rng = np.random.default_rng(seed)
    complex_field = np.iscomplexobj(record.tensors[0])
    us = []
    for i, r in zip(record.dims, hyper.ranks, strict=True):
        a = rng.standard_normal((i, r))
        if complex_field:
            a = a + 1j * rng.standard_normal((i, r))
        us.append(orthonormalize(a))
    cores = [multi_project(x, us) for x in record.tensors]
    state = PredictorState(
        us=us,
        cores=cores,
        params=ARParams.zeros(hyper.spec.p, complex_field),
        history=list(record.tensors),
        t=record.t,
    )
    state.objective = objective(state, hyper)
    state.objective_trace = [state.objective]
    return state


def _check_length(n: int, hyper: Hyperparams) -> None:
    minimum = hyper.spec.lag + 2
    if n < minimum:
        raise SeriesTooShortError(f"need at least {minimum} tensors, got {n}")


@traced(capture_args=["hyper", "seed"])
def stage1_fit(
    record: TTSRecord,
    hyper: Hyperparams,
    seed: int,
    on_iteration: IterationCallback | None = None,
) -> PredictorState:
    """Fit the initial predictor on the starting series (Stage I)."""
    _check_length(record.t, hyper)
    state = initial_state(record, hyper, seed)
    state = run_iterations(state, hyper, hyper.max_iter_stage1, on_iteration=on_iteration)
    logger.info(
        "stage I finished: T0=%d iterations=%d objective=%.6e",
        record.t,
        state.iterations,
        state.objective,
    )
    return state


@traced(capture_args=["hyper"])
def predict_next(state: PredictorState, hyper: Hyperparams) -> DenseTensor:
    """Forecast the next core and map it back through the joint factors."""
    g_hat = forecast(state.params, hyper.spec, state.cores)
    return multi_project(g_hat, state.us, conjugate=False)


def seed_core(
    state: PredictorState, x_new: DenseTensor, hyper: Hyperparams, weight: float = 1.0
) -> DenseTensor:
    """Initial core of a new observation: ``[f_P(G) + varphi*w*X×U^H] / (1 + varphi*w)``."""
    fw = hyper.varphi * weight
    f = forecast(state.params, hyper.spec, state.cores)
    return (f + fw * multi_project(x_new, state.us)) / (1.0 + fw)


def extend_state(
    state: PredictorState, x_new: npt.ArrayLike, hyper: Hyperparams, weight: float = 1.0
) -> PredictorState:
    """Append ``x_new`` with its seeded core; the warm start of online updating."""
    x_new = as_tensor(x_new)
    if tuple(x_new.shape) != state.dims:
        raise TensorShapeError(f"new tensor has shape {x_new.shape}, expected {state.dims}")
    g_new = seed_core(state, x_new, hyper, weight)
    extended = state.model_copy(
        update={
            "cores": [*state.cores, g_new],
            "history": [*state.history, x_new],
            "t": state.t + 1,
            "objective_trace": [],
            "iterations": 0,
        }
    )
    return extended


@traced(capture_args=["hyper"])
def ingest_and_update(
    state: PredictorState, x_new: DenseTensor, hyper: Hyperparams
) -> PredictorState:
    """Ingest one observation and refine the fit on the full history."""
    extended = extend_state(state, x_new, hyper)
    extended.objective = objective(extended, hyper)
    return run_iterations(extended, hyper, hyper.iters_online)


@traced(capture_args=["hyper", "seed"])
def offline_refit_step(
    history: TTSRecord,
    hyper: Hyperparams,
    seed: int,
    warm_start: PredictorState | None = None,
) -> tuple[PredictorState, DenseTensor]:
    """Rebuild the predictor from scratch on the whole history, then predict.

    With ``warm_start`` the Stage-I loop starts from that state instead of a
    random initialization (used to compare against online updating).
    """
    if warm_start is None:
        state = stage1_fit(history, hyper, seed)
    else:
        _check_length(history.t, hyper)
        state = run_iterations(warm_start, hyper, hyper.max_iter_stage1)
    return state, predict_next(state, hyper)


def project_and_append(state: PredictorState, x_new: npt.ArrayLike) -> PredictorState:
    """Append ``x_new`` with its projected core, leaving factors and AR parameters fixed."""
    x_new = as_tensor(x_new)
    if tuple(x_new.shape) != state.dims:
        raise TensorShapeError(f"new tensor has shape {x_new.shape}, expected {state.dims}")
    return state.model_copy(
        update={
            "cores": [*state.cores, multi_project(x_new, state.us)],
            "history": [*state.history, x_new],
            "t": state.t + 1,
        }
    )
