"""AR(p) modelling of core-tensor series with optional d-th order differencing.

A fitted model acts on the d-times differenced series; forecasts are
integrated back to the original level. Equivalently the model is the linear
filter ``phi(B) = (1 - sum_i alpha_i B^i)(1 - B)^d`` and the one-step residual
at time t is ``sum_j phi_j G_{t-j}``; :func:`ar_filter` exposes these taps.
Regression terms exist for 0-based positions ``t >= p + d``.
"""

import logging
from collections.abc import Sequence

import numpy as np

from topa.schemas.hyperparams import ARParams, ARSpec
from topa.schemas.tensor import DenseMatrix, DenseTensor
from topa.services.linalg import solve_reg_normal

logger = logging.getLogger(__name__)


class SeriesTooShortError(ValueError):
    """Series too short for the requested order/differencing."""

    pass


def _stack(series: Sequence[DenseTensor]) -> DenseTensor:
    if len(series) == 0:
        raise SeriesTooShortError("empty series")
    return np.stack([np.asarray(g) for g in series])


def difference(series: Sequence[DenseTensor], d: int) -> DenseTensor:
    """d-th order successive differences, stacked along a new leading axis."""
    stacked = _stack(series)
    if stacked.shape[0] <= d:
        raise SeriesTooShortError(f"need more than {d} entries to difference {d} times")
    return np.diff(stacked, n=d, axis=0) if d > 0 else stacked


def yule_walker_stats(series: Sequence[DenseTensor], p: int) -> tuple[DenseMatrix, DenseTensor]:
    """Lagged inner-product statistics of a series.

    ``rm[i-1, j-1] = sum_{t=p+1..T} <G_{t-i}, G_{t-j}>`` and
    ``rv[i-1] = sum_{t=p+1..T} <G_{t-i}, G_t>`` (1-based t, i, j).
    """
    stacked = _stack(series)
    big_t = stacked.shape[0]
    if big_t < p + 1:
        raise SeriesTooShortError(f"series of length {big_t} is too short for p={p}")
    flat = stacked.reshape(big_t, -1)
    # gram[a, b] = <G_a, G_b>
    gram = flat @ flat.conj().T
    rm = np.empty((p, p), dtype=gram.dtype)
    rv = np.empty(p, dtype=gram.dtype)
    for i in range(1, p + 1):
        rv[i - 1] = np.trace(gram[p - i : big_t - i, p:big_t])
        for j in range(1, p + 1):
            rm[i - 1, j - 1] = np.trace(gram[p - i : big_t - i, p - j : big_t - j])
    return rm, rv


def fit_ar(
    series: Sequence[DenseTensor], spec: ARSpec, lam: float, alpha_prev: ARParams
) -> ARParams:
    """Proximal AR update on the d-times differenced series.

    With ``lam = 0`` this is the exact least-squares fit. The normal equations
    are solved in the conjugated form so complex coefficients minimize the
    residual under ``inner`` conjugating its second argument.
    """
    diffed = difference(series, spec.d)
    if diffed.shape[0] < spec.p + 1:
        raise SeriesTooShortError(
            f"differenced series of length {diffed.shape[0]} is too short for p={spec.p}"
        )
    rm, rv = yule_walker_stats(list(diffed), spec.p)
    alpha = solve_reg_normal(rm.conj(), rv.conj(), lam, alpha_prev.alpha)
    if not np.iscomplexobj(diffed):
        alpha = np.real(alpha)
    return ARParams(alpha=alpha)


def forecast(params: ARParams, spec: ARSpec, series: Sequence[DenseTensor]) -> DenseTensor:
    """One-step forecast ``G_{T+1}`` from the tail of the series."""
    if params.p != spec.p:
        raise ValueError(f"coefficient vector of length {params.p} for p={spec.p}")
    if len(series) < spec.lag:
        raise SeriesTooShortError(
            f"need at least {spec.lag} entries to forecast, got {len(series)}"
        )
    tail = _stack(series[len(series) - spec.lag :])
    # Last value of each differencing level 0..d-1, then the level-d series
    lasts = []
    level = tail
    for _ in range(spec.d):
        lasts.append(level[-1])
        level = np.diff(level, axis=0)
    # level holds the last p entries of the d-times differenced series
    value = np.tensordot(params.alpha, level[::-1], axes=(0, 0))
    for last in reversed(lasts):
        value = last + value
    return np.asarray(value)


def ar_filter(params: ARParams, spec: ARSpec) -> DenseTensor:
    """Residual filter taps ``phi_0..phi_{p+d}`` with ``phi_0 = 1``."""
    taps = np.concatenate([[1.0], -params.alpha])
    for _ in range(spec.d):
        taps = np.convolve(taps, [1.0, -1.0])
    return taps


def one_step_prediction(
    taps: DenseTensor, series: Sequence[DenseTensor], t: int
) -> DenseTensor:
    """``f_P(G_[t-1])`` for 0-based position ``t >= len(taps) - 1``."""
    out = np.zeros_like(series[t], dtype=np.result_type(series[t], taps))
    for j in range(1, len(taps)):
        out = out - taps[j] * series[t - j]
    return out


def regression_residual(
    taps: DenseTensor, series: Sequence[DenseTensor], t: int
) -> DenseTensor:
    """``G_t - f_P(G_[t-1])`` at 0-based position t."""
    return series[t] - one_step_prediction(taps, series, t)


def regression_loss(params: ARParams, spec: ARSpec, series: Sequence[DenseTensor]) -> float:
    """``sum_{t >= p+d} ||G_t - f_P(G_[t-1])||_F^2`` over 0-based positions."""
    taps = ar_filter(params, spec)
    total = 0.0
    for t in range(spec.lag, len(series)):
        r = regression_residual(taps, series, t)
        total += float(np.real(np.vdot(r, r)))
    return total
