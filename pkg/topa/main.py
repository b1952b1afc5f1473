"""Command-line entry point: ``topa gen | stream | bench``.

Effective settings are resolved as: command-line flags, then the JSON file
given with ``--config`` (flat object keyed by flag name, dashes as
underscores), then the defaults from :mod:`topa.config`.

Exit codes: 0 when a report or file was produced, 2 for usage and
configuration errors, 1 for runtime failures. Diagnostics go to stderr.
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from topa import __version__
from topa.config import get_settings
from topa.schemas.aaw import AAWConfig
from topa.schemas.hyperparams import ARSpec, CoreUpdateMode, Hyperparams
from topa.schemas.stream import StreamConfig, StreamMethod
from topa.schemas.synth import SynthConfig
from topa.schemas.tensor import ScalarField
from topa.services.datagen import synth_tts
from topa.services.fileio import (
    load_matrix_series,
    read_tts,
    write_checkpoint,
    write_report,
    write_tts,
)
from topa.services.streaming import run_stream
from topa.tasks.bench import format_table, run_bench
from topa.utils.parsing import parse_int_list, parse_seed_list, positive_int

logger = logging.getLogger("topa")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class ConfigError(ValueError):
    """Invalid or incomplete run configuration."""

    pass


def _load_config_file(path: Path | None) -> dict[str, Any]:
    if path is None:
        return {}
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    values = {key.replace("-", "_"): value for key, value in data.items()}
    if "lambda" in values:
        values["lambda_"] = values.pop("lambda")
    return values


def _merged(args: argparse.Namespace) -> dict[str, Any]:
    """JSON config values overridden by every flag that was given."""
    values = _load_config_file(args.config)
    for key, value in vars(args).items():
        if value is not None:
            values[key] = value
    return values


def _path_value(values: dict[str, Any], key: str) -> Path | None:
    """Path-valued option from flags or the JSON config."""
    value = values.get(key)
    return None if value is None else Path(value)


def _synth_config(values: dict[str, Any]) -> SynthConfig:
    fields = {
        "dims": values.get("dims"),
        "ranks": values.get("ranks"),
        "t": values.get("t"),
        "rho": values.get("rho"),
        "drift_angle": values.get("drift"),
        "seed": values.get("seed"),
        "core_coeffs": values.get("coeffs"),
        "core_d": values.get("core_d"),
        "field": values.get("field"),
    }
    return SynthConfig(**{k: v for k, v in fields.items() if v is not None})


def _hyperparams(values: dict[str, Any]) -> Hyperparams:
    if values.get("ranks") is None:
        raise ConfigError("--ranks is required")
    spec = ARSpec(**{k: values[k] for k in ("p", "d") if values.get(k) is not None})
    fields = {
        "ranks": tuple(values["ranks"]),
        "spec": spec,
        "varphi": values.get("varphi"),
        "lam": values.get("lambda_"),
        "eps": values.get("eps"),
        "max_iter_stage1": values.get("max_iter"),
        "iters_online": values.get("iters"),
        "core_update_mode": values.get("mode"),
    }
    return Hyperparams(**{k: v for k, v in fields.items() if v is not None})


def _aaw_config(values: dict[str, Any]) -> AAWConfig:
    fields = {k: values.get(k) for k in ("tau", "alpha_damp", "beta")}
    return AAWConfig(**{k: v for k, v in fields.items() if v is not None})


def _stream_config(values: dict[str, Any], method: str) -> StreamConfig:
    m = StreamMethod(method)
    fields: dict[str, Any] = {
        "method": m,
        "hyper": _hyperparams(values),
        "t0": values.get("t0"),
        "seed": values.get("seed"),
    }
    if m is StreamMethod.TOPA_AAW or values.get("tau") is not None:
        fields["aaw"] = _aaw_config(values)
    return StreamConfig(**{k: v for k, v in fields.items() if v is not None})


def cmd_gen(args: argparse.Namespace) -> int:
    """Write a synthetic (or imported text) tensor series in the TTS1 format."""
    values = _merged(args)
    output = _path_value(values, "output")
    if output is None:
        raise ConfigError("gen needs an output path (-o or \"output\" in the config)")
    if values.get("from_text") is not None:
        if values.get("dims") is None:
            raise ConfigError("--from-text needs --dims")
        record = load_matrix_series(
            Path(values["from_text"]), values["dims"], values.get("delimiter") or ","
        )
        write_tts(record, output)
        print(f"{output}: dims={'x'.join(map(str, record.dims))} T={record.t} imported")
        return EXIT_OK

    cfg = _synth_config(values)
    stream = synth_tts(cfg)
    write_tts(stream.record, output)
    print(
        f"{output}: dims={'x'.join(map(str, cfg.dims))} T={cfg.t} "
        f"rho={cfg.rho:g} seed={cfg.seed}"
    )
    return EXIT_OK


def cmd_stream(args: argparse.Namespace) -> int:
    """Stream one method over a TTS1 file and emit its RunReport."""
    values = _merged(args)
    try:
        cfg = _stream_config(values, values.get("method") or StreamMethod.TOPA.value)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    checkpoint_out = _path_value(values, "checkpoint_out")
    output = _path_value(values, "output")
    record = read_tts(args.tts)
    report, state = run_stream(record, cfg)
    if checkpoint_out is not None:
        write_checkpoint(state, cfg.hyper, checkpoint_out)
        logger.info("checkpoint written to %s", checkpoint_out)
    if output is not None:
        write_report(report, output)
    else:
        print(report.model_dump_json(indent=2))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    """Run seeded replicas of every requested method and emit the comparison."""
    values = _merged(args)
    seeds = values.get("seeds")
    if seeds is None:
        seeds = list(range(int(values.get("runs") or 1)))
    elif isinstance(seeds, str):
        seeds = parse_seed_list(seeds)
    methods = values.get("methods") or ["topa", "offline-refit"]
    if isinstance(methods, str):
        methods = [m.strip() for m in methods.split(",") if m.strip()]
    synth = _synth_config(values)
    values.setdefault("ranks", synth.ranks)
    try:
        stream_cfgs = [_stream_config(values, m) for m in methods]
    except ValueError as e:
        raise ConfigError(str(e)) from e

    report = run_bench(synth, stream_cfgs, seeds, n_jobs=values.get("workers"))
    table = format_table(report)
    output = _path_value(values, "output")
    if output is not None:
        write_report(report, output)
        print(table)
    else:
        print(report.model_dump_json(indent=2))
        sys.stderr.write(table + "\n")
    return EXIT_OK


def _add_synth_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dims", type=parse_int_list, help="Tensor dims, e.g. 20,20,20")
    p.add_argument("--ranks", type=parse_int_list, help="Tucker ranks, e.g. 4,4,4")
    p.add_argument("--t", type=positive_int, help="Series length")
    p.add_argument("--rho", type=float, help="Noise-to-signal ratio")
    p.add_argument("--drift", type=float, help="Subspace rotation angle per step (radians)")
    p.add_argument("--coeffs", type=lambda s: tuple(float(v) for v in s.split(",")),
                   help="AR coefficients of the core recursion")
    p.add_argument("--core-d", type=int, help="Differencing order of the core recursion")
    p.add_argument("--field", choices=[f.value for f in ScalarField])


def _add_stream_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t0", type=positive_int, help="Stage-I starting length")
    p.add_argument("--p", type=positive_int, help="AR order")
    p.add_argument("--d", type=int, help="Differencing order")
    p.add_argument("--varphi", type=float)
    p.add_argument("--lambda", dest="lambda_", type=float, help="Proximal step size")
    p.add_argument("--eps", type=float, help="Squared-change stopping tolerance")
    p.add_argument("--iters", type=positive_int, help="Sweeps per online step")
    p.add_argument("--max-iter", type=positive_int, help="Stage-I iteration budget")
    p.add_argument("--tau", type=int, help="AAW window length")
    p.add_argument("--alpha-damp", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--mode", choices=[m.value for m in CoreUpdateMode])


def build_parser() -> argparse.ArgumentParser:
    """Top-level parser with the gen, stream and bench subcommands."""
    parser = argparse.ArgumentParser(
        prog="topa", description="Streaming tensor time-series forecasting"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate a synthetic TTS1 file")
    gen.add_argument("--config", type=Path, help="JSON config file")
    gen.add_argument("-o", "--output", type=Path, help="TTS1 path (or \"output\" in the config)")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--from-text", type=Path, help="Import a delimited text series instead")
    gen.add_argument("--delimiter")
    _add_synth_flags(gen)
    gen.set_defaults(handler=cmd_gen)

    stream = sub.add_parser("stream", help="Stream a method over a TTS1 file")
    stream.add_argument("tts", type=Path)
    stream.add_argument("--config", type=Path, help="JSON config file")
    stream.add_argument("-o", "--output", type=Path, help="Report path (default: stdout)")
    stream.add_argument("--method", choices=[m.value for m in StreamMethod])
    stream.add_argument("--ranks", type=parse_int_list)
    stream.add_argument("--seed", type=int)
    stream.add_argument("--checkpoint-out", type=Path)
    _add_stream_flags(stream)
    stream.set_defaults(handler=cmd_stream)

    bench = sub.add_parser("bench", help="Monte-Carlo comparison of methods")
    bench.add_argument("--config", type=Path, help="JSON config file")
    bench.add_argument("-o", "--output", type=Path, help="Report path (default: stdout)")
    bench.add_argument("--runs", type=positive_int, help="Replicas with seeds 0..N-1")
    bench.add_argument("--seeds", type=parse_seed_list, help="Explicit seeds: 0,3,7 or 0:100")
    bench.add_argument("--methods", help="Comma-separated methods (default: topa,offline-refit)")
    bench.add_argument("--workers", type=positive_int, help="Parallel worker processes")
    _add_synth_flags(bench)
    _add_stream_flags(bench)
    bench.set_defaults(handler=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, configure logging and dispatch to a subcommand."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=args.log_level or get_settings().log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )

    try:
        return int(args.handler(args))
    except (ConfigError, ValidationError) as e:
        logger.error("invalid configuration: %s", e)
        return EXIT_USAGE
    except (OSError, ValueError, ArithmeticError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_RUNTIME
    except Exception:
        logger.exception("unexpected failure")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
