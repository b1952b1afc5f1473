"""Shared builders for test series with known ground truth."""

from collections.abc import Sequence

import numpy as np

from topa.schemas import TTSRecord
from topa.services.linalg import orthonormalize
from topa.services.tensor_core import multi_project


def random_orthonormal(
    rng: np.random.Generator, rows: int, cols: int, complex_field: bool = False
) -> np.ndarray:
    """Orthonormal columns from a Gaussian matrix."""
    a = rng.standard_normal((rows, cols))
    if complex_field:
        a = a + 1j * rng.standard_normal((rows, cols))
    return orthonormalize(a)


def make_exact_ar_stream(
    dims: Sequence[int],
    ranks: Sequence[int],
    alpha: Sequence[complex],
    t: int,
    seed: int,
    complex_field: bool = False,
) -> dict:
    """Noiseless joint-Tucker series whose cores follow an AR(p) recursion exactly.

    Returns:
        Dict with ``record``, ``us`` and ``cores``; ``next`` is X_{T+1}.
    """
    rng = np.random.default_rng(seed)
    us = [random_orthonormal(rng, i, r, complex_field) for i, r in zip(dims, ranks, strict=True)]
    p = len(alpha)
    cores = []
    for _ in range(p):
        g = rng.standard_normal(tuple(ranks))
        if complex_field:
            g = g + 1j * rng.standard_normal(tuple(ranks))
        cores.append(g)
    while len(cores) < t + 1:
        cores.append(sum(a * cores[-1 - i] for i, a in enumerate(alpha)))
    tensors = [multi_project(g, us, conjugate=False) for g in cores]
    return {
        "record": TTSRecord.from_arrays(tensors[:t]),
        "us": us,
        "cores": cores[:t],
        "next": tensors[t],
    }
