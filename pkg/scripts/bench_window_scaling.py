"""Time one windowed sweep for window lengths tau and 2*tau.

The per-sweep cost grows linearly in the window length at fixed dims, so the
printed ratio should sit near 2.

Usage:
    python scripts/bench_window_scaling.py
    python scripts/bench_window_scaling.py --tau 10 --dims 20,20,20 --repeats 7
"""

import argparse
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))


from topa.schemas import ARSpec, Hyperparams, SynthConfig
from topa.services.datagen import synth_tts
from topa.tasks.bench import window_sweep_micros
from topa.utils.parsing import parse_int_list, positive_int


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--tau", type=positive_int, default=8)
    parser.add_argument("--dims", type=parse_int_list, default=(20, 20, 20))
    parser.add_argument("--rank", type=positive_int, default=4)
    parser.add_argument("--repeats", type=positive_int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    ranks = tuple(args.rank for _ in args.dims)
    spec = ARSpec(p=3, d=1)
    hyper = Hyperparams(ranks=ranks, spec=spec)
    record = synth_tts(
        SynthConfig(dims=args.dims, ranks=ranks, t=2 * args.tau + spec.lag, seed=args.seed)
    ).record

    short = window_sweep_micros(record, hyper, args.tau, args.repeats, args.seed)
    long = window_sweep_micros(record, hyper, 2 * args.tau, args.repeats, args.seed)
    print(f"tau={args.tau:<4} sweep={short:>10.0f} us")
    print(f"tau={2 * args.tau:<4} sweep={long:>10.0f} us")
    print(f"ratio={long / short:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
