"""Seeded synthetic streaming TTS: low-rank noisy series, optionally with drifting subspaces.

Each stream draws four independent child generators from ``cfg.seed``
(subspaces, core innovations, noise, drift planes), so changing one
component's draw count never perturbs the others.
"""

import logging
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from topa.config import get_settings
from topa.schemas.record import TTSRecord
from topa.schemas.synth import SynthConfig
from topa.schemas.tensor import DenseMatrix, DenseTensor, ScalarField
from topa.services.linalg import orthonormalize
from topa.services.tensor_core import frob_norm, multi_project

logger = logging.getLogger(__name__)


class UnstableCoefficientsError(ValueError):
    """AR coefficients whose companion matrix has spectral radius >= 1."""

    pass


class SyntheticStream(BaseModel):
    """Generated series plus its ground-truth components."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    record: TTSRecord
    cores: list[DenseTensor]
    signals: list[DenseTensor]
    # subspaces[t][m] is U_m at 0-based time t
    subspaces: list[list[DenseMatrix]]


def _generators(seed: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(4)]


def _gaussian(rng: np.random.Generator, shape: tuple[int, ...], field: ScalarField) -> DenseTensor:
    if field is ScalarField.REAL:
        return rng.standard_normal(shape)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def spectral_radius(coeffs: Sequence[float]) -> float:
    """Spectral radius of the AR companion matrix."""
    p = len(coeffs)
    companion = np.zeros((p, p))
    companion[0, :] = coeffs
    companion[1:, :-1] = np.eye(p - 1)
    return float(np.max(np.abs(np.linalg.eigvals(companion))))


def check_stable(coeffs: Sequence[float]) -> None:
    """Raise :class:`UnstableCoefficientsError` unless the recursion is stable."""
    radius = spectral_radius(coeffs)
    if radius >= 1.0:
        raise UnstableCoefficientsError(
            f"coefficients {tuple(coeffs)} have companion spectral radius {radius:.4f} >= 1"
        )


def gen_subspaces(cfg: SynthConfig) -> list[DenseMatrix]:
    """Orthonormal factors from seeded Gaussian matrices."""
    rng = _generators(cfg.seed)[0]
    return [
        orthonormalize(_gaussian(rng, (i, r), cfg.field))
        for i, r in zip(cfg.dims, cfg.ranks, strict=True)
    ]


def gen_core_series(cfg: SynthConfig, innovation_scale: float = 1.0) -> list[DenseTensor]:
    """Entrywise ARIMA(p, d, 0) core recursions with a discarded burn-in."""
    check_stable(cfg.core_coeffs)
    rng = _generators(cfg.seed)[1]
    burn_in = get_settings().burn_in
    n = burn_in + cfg.t
    coeffs = np.asarray(cfg.core_coeffs)
    p = len(coeffs)
    innovations = innovation_scale * _gaussian(rng, (n, *cfg.ranks), cfg.field)

    diffed = np.zeros_like(innovations)
    for k in range(n):
        value = innovations[k].copy()
        for i in range(1, min(p, k) + 1):
            value += coeffs[i - 1] * diffed[k - i]
        diffed[k] = value

    level = diffed
    for _ in range(cfg.core_d):
        level = np.cumsum(level, axis=0)
    return list(level[burn_in:])


def givens_rotation(rng: np.random.Generator, size: int, angle: float, field: ScalarField) -> DenseMatrix:
    """Rotation by ``angle`` in a random plane of the ambient space."""
    if size < 2:
        return np.eye(size, dtype=field.dtype)
    plane = orthonormalize(_gaussian(rng, (size, 2), field))
    a, b = plane[:, :1], plane[:, 1:]
    return (
        np.eye(size, dtype=field.dtype)
        + (np.cos(angle) - 1.0) * (a @ a.conj().T + b @ b.conj().T)
        + np.sin(angle) * (b @ a.conj().T - a @ b.conj().T)
    )


def synth_tts(cfg: SynthConfig) -> SyntheticStream:
    """``X_t = G_t ×U + rho * ||G_t|| * E_t`` with ``||E_t||_F = 1``."""
    us = gen_subspaces(cfg)
    cores = gen_core_series(cfg)
    _, _, noise_rng, drift_rng = _generators(cfg.seed)

    rotations = None
    if cfg.drift_angle > 0:
        rotations = [givens_rotation(drift_rng, i, cfg.drift_angle, cfg.field) for i in cfg.dims]

    tensors, signals, subspaces = [], [], []
    current = us
    for k, g in enumerate(cores):
        if rotations is not None and k > 0:
            current = [q @ u for q, u in zip(rotations, current, strict=True)]
        signal = multi_project(g, current, conjugate=False)
        noise = _gaussian(noise_rng, cfg.dims, cfg.field)
        noise = noise / frob_norm(noise)
        tensors.append(signal + cfg.rho * frob_norm(g) * noise)
        signals.append(signal)
        subspaces.append(list(current))

    logger.info(
        "generated synthetic TTS dims=%s ranks=%s T=%d rho=%g drift=%g seed=%d",
        cfg.dims,
        cfg.ranks,
        cfg.t,
        cfg.rho,
        cfg.drift_angle,
        cfg.seed,
    )
    return SyntheticStream(
        record=TTSRecord.from_arrays(tensors),
        cores=cores,
        signals=signals,
        subspaces=subspaces,
    )
