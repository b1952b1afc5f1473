"""Monte-Carlo benchmark: seeded synthetic replicas streamed through several methods."""

import logging
from collections.abc import Sequence

import numpy as np
from joblib import Parallel, delayed

from topa.config import get_settings
from topa.schemas.aaw import WeightVector
from topa.schemas.hyperparams import Hyperparams
from topa.schemas.record import TTSRecord
from topa.schemas.report import BenchReport, MethodSummary, RunReport
from topa.schemas.stream import StreamConfig
from topa.schemas.synth import SynthConfig
from topa.services.aaw import slide_window
from topa.services.datagen import synth_tts
from topa.services.engine import initial_state, sweep
from topa.services.metrics import mean_and_stderr
from topa.services.streaming import run_stream
from topa.services.tracing import timed

logger = logging.getLogger(__name__)


def method_labels(methods: Sequence[StreamConfig]) -> list[str]:
    """Row label per configuration: the method name, suffixed ``#k`` (k = position) when repeated."""
    names = [cfg.method.value for cfg in methods]
    return [name if names.count(name) == 1 else f"{name}#{k}" for k, name in enumerate(names)]


def run_replica(synth: SynthConfig, methods: Sequence[StreamConfig], seed: int) -> list[RunReport]:
    """Generate the stream for ``seed`` and run every method on it.

    The same seed drives data generation and each method's Stage-I
    initialization. Each report carries its configuration's label.
    """
    record = synth_tts(synth.model_copy(update={"seed": seed})).record
    reports = []
    for cfg, label in zip(methods, method_labels(methods), strict=True):
        report, _ = run_stream(record, cfg.model_copy(update={"seed": seed}))
        reports.append(report.model_copy(update={"label": label}))
    return reports


def summarize(runs: Sequence[RunReport]) -> list[MethodSummary]:
    """Mean NRMSE (with standard error) and mean step time per label, in first-seen order."""
    by_label: dict[str, list[RunReport]] = {}
    for run in runs:
        by_label.setdefault(run.label, []).append(run)

    summaries = []
    for label, group in by_label.items():
        mean, stderr = mean_and_stderr([r.mean_nrmse for r in group])
        summaries.append(
            MethodSummary(
                method=group[0].method,
                label=label,
                runs=len(group),
                mean_nrmse=mean,
                stderr_nrmse=stderr,
                mean_micros=sum(r.mean_micros for r in group) / len(group),
            )
        )
    return summaries


def run_bench(
    synth: SynthConfig,
    methods: Sequence[StreamConfig],
    seeds: Sequence[int],
    n_jobs: int | None = None,
) -> BenchReport:
    """Run one replica per seed in parallel and aggregate per method.

    Results are merged in seed order, so the report depends only on the
    configuration and the seed list.

    Args:
        synth: Synthetic stream configuration (its seed is replaced per replica)
        methods: One streaming configuration per compared method
        seeds: Replica seeds
        n_jobs: Worker processes; defaults to ``settings.bench_workers``
    """
    if not seeds:
        raise ValueError("at least one seed is required")
    if not methods:
        raise ValueError("at least one method is required")
    n_jobs = n_jobs if n_jobs is not None else get_settings().bench_workers
    logger.info("bench: %d replicas x %d methods on %d workers", len(seeds), len(methods), n_jobs)

    per_seed = Parallel(n_jobs=n_jobs)(
        delayed(run_replica)(synth, methods, seed) for seed in seeds
    )
    runs = [report for reports in per_seed for report in reports]
    return BenchReport(
        seeds=list(seeds),
        methods=summarize(runs),
        runs=runs,
        config={
            "synth": synth.model_dump(mode="json"),
            "methods": [cfg.model_dump(mode="json") for cfg in methods],
        },
    )


def format_table(report: BenchReport) -> str:
    """Aligned text table of the summaries, one row per label."""
    header = f"{'method':<14} {'runs':>5} {'mean_nrmse':>11} {'stderr':>9} {'mean_us':>11}"
    lines = [header, "-" * len(header)]
    for s in report.methods:
        lines.append(
            f"{s.label:<14} {s.runs:>5} {s.mean_nrmse:>11.5f} {s.stderr_nrmse:>9.5f} {s.mean_micros:>11.0f}"
        )
    return "\n".join(lines)


def window_sweep_micros(
    record: TTSRecord, hyper: Hyperparams, tau: int, repeats: int = 5, seed: int = 0
) -> float:
    """Median wall time of one unit-weight sweep over a window of ``tau`` entries.

    The state is the randomly initialized fit of ``record`` cut down to its
    newest ``tau`` entries plus ``p + d`` frozen context cores.
    """
    if record.t < tau + hyper.spec.lag:
        raise ValueError(f"record of length {record.t} is too short for tau={tau}")
    state = slide_window(initial_state(record, hyper, seed), tau, hyper.spec.lag)
    weights = WeightVector.ones(state.t - tau + 1, tau)
    samples = [timed(lambda: sweep(state, hyper, weights))[1] for _ in range(repeats)]
    return float(np.median(samples))
