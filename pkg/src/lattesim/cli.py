"""Command line interface.

Subcommands: iterate, cycles, oracle-check, forward, backward. Complex
points are written re,im (or the literal inf), Bloch points u,v,w. Exit
status 0 on success, 1 when a check or convergence tolerance fails, 2 on
invalid parameters.
"""

from __future__ import annotations

import argparse
import sys

from .bloch import bloch_map, find_mixed_cycles
from .experiments import (
    BRANCH_POLICIES,
    BackwardExperimentConfig,
    ForwardExperimentConfig,
    median_iterations,
    run_backward,
    run_forward,
    write_histogram_csv,
    write_histogram_json,
)
from .oracle import deviation_sweep
from .riemann import find_pure_cycles, lattes_orbit
from .states import INFINITY, BlochVector, ExtendedComplex


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def format_point(p: ExtendedComplex) -> str:
    if p.is_infinite:
        return "inf"
    return f"{_fmt(p.value.real)},{_fmt(p.value.imag)}"


def format_bloch(b: BlochVector) -> str:
    return f"{_fmt(b.u)},{_fmt(b.v)},{_fmt(b.w)}"


def parse_z(text: str) -> ExtendedComplex:
    t = text.strip().lower()
    if t == "inf":
        return INFINITY
    parts = t.split(",")
    if len(parts) == 1:
        return ExtendedComplex(complex(float(parts[0]), 0.0))
    if len(parts) == 2:
        return ExtendedComplex(complex(float(parts[0]), float(parts[1])))
    raise ValueError(f"cannot parse point {text!r}; expected re,im or inf")


def parse_bloch(text: str) -> BlochVector:
    parts = text.strip().split(",")
    if len(parts) != 3:
        raise ValueError(f"cannot parse Bloch point {text!r}; expected u,v,w")
    return BlochVector(float(parts[0]), float(parts[1]), float(parts[2]))


def _cmd_iterate(args) -> int:
    if (args.z is None) == (args.bloch is None):
        raise ValueError("iterate needs exactly one of --z or --bloch")
    if args.steps < 0:
        raise ValueError("steps must be non-negative")
    if args.z is not None:
        for p in lattes_orbit(parse_z(args.z), args.steps):
            print(format_point(p))
    else:
        b = parse_bloch(args.bloch)
        print(format_bloch(b))
        for _ in range(args.steps):
            b = bloch_map(b)
            print(format_bloch(b))
    return 0


def _cmd_cycles(args) -> int:
    if args.space == "pure":
        for c in find_pure_cycles(args.max_period):
            points = "|".join(format_point(p) for p in c.points)
            print(
                f"period={c.period} points={points} "
                f"multiplier={_fmt(c.multiplier.real)},{_fmt(c.multiplier.imag)} "
                f"abs_multiplier={_fmt(abs(c.multiplier))} class={c.classification} "
                f"residual={c.residual:.3e}"
            )
    else:
        for c in find_mixed_cycles(args.max_period):
            points = "|".join(format_bloch(p) for p in c.points)
            purity = max(p.purity() for p in c.points)
            print(
                f"period={c.period} points={points} "
                f"purity={_fmt(purity)} residual={c.residual:.3e}"
            )
    return 0


def _cmd_oracle_check(args) -> int:
    pure_dev, mixed_dev = deviation_sweep(args.samples, args.seed)
    ok = pure_dev < args.tolerance and mixed_dev < args.tolerance
    print(f"pure step vs closed form: max_deviation={pure_dev:.3e} tolerance={args.tolerance:g} "
          f"{'PASS' if pure_dev < args.tolerance else 'FAIL'}")
    print(f"mixed step vs closed form: max_deviation={mixed_dev:.3e} tolerance={args.tolerance:g} "
          f"{'PASS' if mixed_dev < args.tolerance else 'FAIL'}")
    return 0 if ok else 1


def _writer(fmt):
    return write_histogram_csv if fmt == "csv" else write_histogram_json


def _finish_experiment(hist, args) -> int:
    _writer(args.format)(hist, args.out)
    longest = max(hist.counts) if hist.counts else -1
    median = median_iterations(hist) if hist.counts else float("nan")
    print(
        f"{hist.kind}: samples={hist.config.sample_count} "
        f"converged={hist.converged_total()} non_converged={hist.non_converged} "
        f"median={median:g} max={longest} runtime={hist.runtime_seconds:.2f}s out={args.out}"
    )
    frac = hist.non_converged / hist.config.sample_count
    if frac > args.tolerate_nonconverged:
        print(
            f"error: {hist.non_converged} of {hist.config.sample_count} samples "
            f"missed the iteration cap tolerance {args.tolerate_nonconverged}",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_forward(args) -> int:
    config = ForwardExperimentConfig(
        sample_count=args.samples,
        epsilon=args.epsilon,
        max_iterations=args.cap,
        rng_seed=args.seed,
    )
    return _finish_experiment(run_forward(config, workers=args.workers), args)


def _cmd_backward(args) -> int:
    config = BackwardExperimentConfig(
        sample_count=args.samples,
        start_radius=args.radius,
        purity_threshold=args.threshold,
        branch_policy=args.policy,
        max_iterations=args.cap,
        rng_seed=args.seed,
    )
    return _finish_experiment(run_backward(config, workers=args.workers), args)


def _add_common_experiment_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cap", type=int, default=1_000_000, help="iteration cap per sample")
    p.add_argument("--seed", type=int, default=42, help="master seed; fixes all randomness")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.add_argument("--out", required=True, help="output histogram path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument(
        "--tolerate-nonconverged",
        type=float,
        default=0.0,
        metavar="FRAC",
        help="largest acceptable non-converged fraction before exit status 1",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lattesim",
        description="Iterated measurement-induced qubit map: orbits, cycles, and convergence experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("iterate", help="print a forward orbit")
    p.add_argument("--z", help="pure state label re,im or inf (use --z=-1,0 for negatives)")
    p.add_argument("--bloch", help="Bloch point u,v,w")
    p.add_argument("--steps", type=int, default=10)
    p.set_defaults(func=_cmd_iterate)

    p = sub.add_parser("cycles", help="closed-form periodic cycles")
    p.add_argument("--max-period", type=int, choices=(1, 2), default=2)
    p.add_argument("--space", choices=("pure", "bloch"), default="pure")
    p.set_defaults(func=_cmd_cycles)

    p = sub.add_parser("oracle-check", help="compare closed forms against the two-qubit simulation")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.set_defaults(func=_cmd_oracle_check)

    p = sub.add_parser("forward", help="first-passage times into the epsilon ball")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--epsilon", type=float, default=1e-3)
    _add_common_experiment_args(p)
    p.set_defaults(func=_cmd_forward)

    p = sub.add_parser("backward", help="inverse-branch iteration until nearly pure")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--radius", type=float, default=1e-2)
    p.add_argument("--threshold", type=float, default=0.99)
    p.add_argument("--policy", choices=BRANCH_POLICIES, default="random")
    _add_common_experiment_args(p)
    p.set_defaults(func=_cmd_backward)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
