"""Backward purification experiment, all three branch policies.

Starts near the completely mixed state, iterates a chosen inverse branch
until the purity threshold is reached, and writes one histogram CSV per
policy. Also reports where the terminal states concentrate: plus_only
collapses onto the fixed point (1,0,0), minus_only onto the other pure
cycles, and the random policy spreads over the whole sphere.
"""

import argparse
import pathlib

import numpy as np

from lattesim.bloch import find_mixed_cycles
from lattesim.experiments import (
    BRANCH_POLICIES,
    BackwardExperimentConfig,
    median_iterations,
    run_backward,
    write_histogram_csv,
)


def terminal_summary(hist) -> str:
    cycles = find_mixed_cycles(2)
    x_pole = np.array(cycles[1].points[0].as_array())
    others = np.array([p.as_array() for c in cycles[2:] for p in c.points])
    t = hist.terminal_points
    near_pole = float(np.mean(np.linalg.norm(t - x_pole, axis=1) <= 1e-2))
    near_others = float(
        np.mean(np.linalg.norm(t[:, None, :] - others[None, :, :], axis=2).min(axis=1) <= 0.05)
    )
    return f"near_(1,0,0)={near_pole:.4f} near_other_cycles={near_others:.4f}"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=10_000)
    parser.add_argument("--radius", type=float, default=1e-2)
    parser.add_argument("--threshold", type=float, default=0.99)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--cap", type=int, default=1_000_000)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out-dir", default=".")
    args = parser.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for policy in BRANCH_POLICIES:
        config = BackwardExperimentConfig(
            sample_count=args.samples,
            start_radius=args.radius,
            purity_threshold=args.threshold,
            branch_policy=policy,
            max_iterations=args.cap,
            rng_seed=args.seed,
        )
        hist = run_backward(config, workers=args.workers)
        out = out_dir / f"backward_{policy}.csv"
        write_histogram_csv(hist, out)
        print(
            f"policy={policy} non_converged={hist.non_converged} "
            f"median={median_iterations(hist):g} max={max(hist.counts)} "
            f"{terminal_summary(hist)} out={out}"
        )


if __name__ == "__main__":
    main()
