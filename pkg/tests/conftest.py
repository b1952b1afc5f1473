"""Pytest configuration and fixtures."""

import numpy as np
import pytest

from topa.config import get_settings
from topa.schemas import ARSpec, CoreUpdateMode, Hyperparams, SynthConfig
from topa.services.datagen import synth_tts
from topa.services.engine import stage1_fit
from tests.helpers import make_exact_ar_stream

settings = get_settings()


def pytest_addoption(parser):
    """Add custom CLI options."""
    parser.addoption(
        "--run-bench",
        action="store_true",
        default=False,
        help="Run long statistical and timing acceptance benchmarks",
    )


def pytest_collection_modifyitems(config, items):
    """Skip bench tests unless --run-bench is passed."""
    if config.getoption("--run-bench"):
        return
    skip_bench = pytest.mark.skip(reason="need --run-bench option to run")
    for item in items:
        if "bench" in item.keywords:
            item.add_marker(skip_bench)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for test data."""
    return np.random.default_rng(20240611)


@pytest.fixture
def small_hyper() -> Hyperparams:
    """Hyperparameters for a (6, 5, 4) series with ranks (2, 2, 2) and AR(1)."""
    return Hyperparams(
        ranks=(2, 2, 2),
        spec=ARSpec(p=1, d=0),
        varphi=10.0,
        lam=1.0,
        eps=1e-10,
        max_iter_stage1=50,
        iters_online=1,
    )


@pytest.fixture
def exact_hyper(small_hyper: Hyperparams) -> Hyperparams:
    """``small_hyper`` in ExactBlock mode."""
    return small_hyper.model_copy(update={"core_update_mode": CoreUpdateMode.EXACT_BLOCK})


@pytest.fixture
def exact_stream():
    """Noiseless (6, 5, 4) series with ranks (2, 2, 2) and exact AR(1) cores, T=14."""
    return make_exact_ar_stream(dims=(6, 5, 4), ranks=(2, 2, 2), alpha=[0.9], t=14, seed=3)


@pytest.fixture
def noisy_record():
    """Small noisy synthetic series (dims (6, 5, 4), ranks (2, 2, 2), T=16)."""
    cfg = SynthConfig(
        dims=(6, 5, 4),
        ranks=(2, 2, 2),
        t=16,
        rho=0.1,
        core_coeffs=(0.6,),
        core_d=0,
        seed=11,
    )
    return synth_tts(cfg).record


@pytest.fixture
def fitted_state(noisy_record, small_hyper):
    """Stage-I state on the first 12 tensors of ``noisy_record``."""
    return stage1_fit(noisy_record.head(12), small_hyper, seed=5)
