"""Seeded Monte Carlo convergence experiments.

Forward: sample the Bloch ball, iterate the protocol map, and histogram the
first-passage time into the ball of radius epsilon around the center.
Backward: sample near the center, iterate a chosen inverse branch per step,
and histogram the steps until the purity threshold is reached.

Every sample i draws from its own generator derived from (seed, i), so
results do not depend on how samples are partitioned across workers and
repeated runs produce byte-identical output files.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .bloch import _inverse_uvw
from .states import BlochVector

_SCHEMA_VERSION = 1
_CHUNK = 20_000  # samples per work unit, fixed so chunking stays seed-stable
_BIT_BLOCK = 256  # branch bits drawn per refill of a sample's coin stream

BRANCH_POLICIES = ("random", "plus_only", "minus_only")


@dataclass(frozen=True)
class ForwardExperimentConfig:
    """Forward experiment: samples fill the ball of radius 1 - epsilon."""

    sample_count: int = 100_000
    epsilon: float = 1e-3
    max_iterations: int = 1_000_000
    rng_seed: int = 42

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be at least 1")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be non-negative")


@dataclass(frozen=True)
class BackwardExperimentConfig:
    """Backward experiment: inverse-branch iteration until nearly pure."""

    sample_count: int = 10_000
    start_radius: float = 1e-2
    purity_threshold: float = 0.99
    branch_policy: str = "random"
    max_iterations: int = 1_000_000
    rng_seed: int = 42

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be at least 1")
        if not 0.0 < self.start_radius < 1.0:
            raise ValueError("start_radius must lie in (0, 1)")
        if not 0.5 < self.purity_threshold <= 1.0:
            raise ValueError("purity_threshold must lie in (1/2, 1]")
        if self.branch_policy not in BRANCH_POLICIES:
            raise ValueError(f"branch_policy must be one of {BRANCH_POLICIES}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be non-negative")


@dataclass(eq=False)
class ConvergenceHistogram:
    """First-passage counts keyed by iteration number.

    non_converged counts the samples that hit the iteration cap. The
    terminal points of backward runs are kept for analysis but are not part
    of the serialized table. runtime_seconds is informational only and
    never written to output files.
    """

    counts: dict[int, int]
    non_converged: int
    config: ForwardExperimentConfig | BackwardExperimentConfig
    runtime_seconds: float = 0.0
    terminal_points: np.ndarray | None = None

    @property
    def kind(self) -> str:
        return "forward" if isinstance(self.config, ForwardExperimentConfig) else "backward"

    def converged_total(self) -> int:
        return sum(self.counts.values())


def substream(seed: int, index: int) -> np.random.Generator:
    """The dedicated random generator of sample `index` under `seed`."""
    return np.random.default_rng(np.random.SeedSequence((seed, index)))


def sample_ball_uniform(radius: float, rng: np.random.Generator) -> BlochVector:
    """Volume-uniform point of the closed ball of the given radius.

    Isotropic direction from three normals, radius scaled by U^(1/3).
    The mean norm at radius 1 is 3/4.
    """
    if radius < 0.0:
        raise ValueError("radius must be non-negative")
    d = rng.normal(size=3)
    n = math.sqrt(d[0] ** 2 + d[1] ** 2 + d[2] ** 2)
    while n == 0.0:  # unreachable in practice, kept for totality
        d = rng.normal(size=3)
        n = math.sqrt(d[0] ** 2 + d[1] ** 2 + d[2] ** 2)
    r = radius * rng.random() ** (1.0 / 3.0)
    return BlochVector(r * d[0] / n, r * d[1] / n, r * d[2] / n)


def _draw_points(seed: int, lo: int, hi: int, radius: float) -> np.ndarray:
    pts = np.empty((hi - lo, 3), dtype=float)
    for i in range(lo, hi):
        b = sample_ball_uniform(radius, substream(seed, i))
        pts[i - lo] = (b.u, b.v, b.w)
    return pts


def _forward_passage_counts(points: np.ndarray, epsilon: float, cap: int) -> np.ndarray:
    """First-passage times of the forward map into the epsilon ball.

    One entry per row of points; -1 marks a sample still outside after cap
    iterations. A point already inside counts as 0.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    counts = np.full(len(pts), -1, dtype=np.int64)
    u, v, w = pts[:, 0].copy(), pts[:, 1].copy(), pts[:, 2].copy()
    alive = np.arange(len(pts))
    eps2 = epsilon * epsilon
    inside = u * u + v * v + w * w <= eps2
    counts[alive[inside]] = 0
    keep = ~inside
    u, v, w, alive = u[keep], v[keep], w[keep], alive[keep]
    step = 0
    while alive.size and step < cap:
        step += 1
        h = 1.0 + w * w
        u, v, w = (u * u - v * v) / h, 2.0 * w / h, -2.0 * u * v / h
        inside = u * u + v * v + w * w <= eps2
        if inside.any():
            counts[alive[inside]] = step
            keep = ~inside
            u, v, w, alive = u[keep], v[keep], w[keep], alive[keep]
    return counts


def _forward_chunk(args: tuple[ForwardExperimentConfig, int, int]) -> np.ndarray:
    config, lo, hi = args
    pts = _draw_points(config.rng_seed, lo, hi, 1.0 - config.epsilon)
    return _forward_passage_counts(pts, config.epsilon, config.max_iterations)


def _backward_chunk(args: tuple[BackwardExperimentConfig, int, int]) -> tuple[np.ndarray, np.ndarray]:
    config, lo, hi = args
    counts = np.empty(hi - lo, dtype=np.int64)
    terminals = np.empty((hi - lo, 3), dtype=float)
    norm2_stop = 2.0 * config.purity_threshold - 1.0
    fixed_sign = {"plus_only": 1.0, "minus_only": -1.0}.get(config.branch_policy)
    for i in range(lo, hi):
        rng = substream(config.rng_seed, i)
        b = sample_ball_uniform(config.start_radius, rng)
        u, v, w = b.u, b.v, b.w
        bits = None
        pos = 0
        steps = 0
        while u * u + v * v + w * w < norm2_stop and steps < config.max_iterations:
            if fixed_sign is None:
                if bits is None or pos == _BIT_BLOCK:
                    bits = rng.integers(0, 2, size=_BIT_BLOCK, dtype=np.uint8)
                    pos = 0
                sign = 1.0 if bits[pos] else -1.0
                pos += 1
            else:
                sign = fixed_sign
            u, v, w = _inverse_uvw(u, v, w, sign)
            steps += 1
        converged = u * u + v * v + w * w >= norm2_stop
        counts[i - lo] = steps if converged else -1
        terminals[i - lo] = (u, v, w)
    return counts, terminals


def _chunk_bounds(n: int) -> Iterator[tuple[int, int]]:
    for lo in range(0, n, _CHUNK):
        yield lo, min(lo + _CHUNK, n)


def _run_chunks(fn, config, workers: int) -> list:
    tasks = [(config, lo, hi) for lo, hi in _chunk_bounds(config.sample_count)]
    if workers <= 1 or len(tasks) == 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _tally(count_arrays: list[np.ndarray]) -> tuple[dict[int, int], int]:
    merged = np.concatenate(count_arrays)
    non_converged = int(np.sum(merged < 0))
    values, freq = np.unique(merged[merged >= 0], return_counts=True)
    return {int(k): int(c) for k, c in zip(values, freq)}, non_converged


def run_forward(config: ForwardExperimentConfig, workers: int = 1) -> ConvergenceHistogram:
    """Run the forward first-passage experiment."""
    t0 = time.perf_counter()
    counts, non_converged = _tally(_run_chunks(_forward_chunk, config, workers))
    hist = ConvergenceHistogram(counts, non_converged, config, time.perf_counter() - t0)
    assert hist.converged_total() + hist.non_converged == config.sample_count
    return hist


def run_backward(config: BackwardExperimentConfig, workers: int = 1) -> ConvergenceHistogram:
    """Run the backward purification experiment; keeps terminal points."""
    t0 = time.perf_counter()
    results = _run_chunks(_backward_chunk, config, workers)
    counts, non_converged = _tally([c for c, _ in results])
    terminals = np.concatenate([t for _, t in results])
    hist = ConvergenceHistogram(counts, non_converged, config, time.perf_counter() - t0, terminals)
    assert hist.converged_total() + hist.non_converged == config.sample_count
    return hist


def median_iterations(hist: ConvergenceHistogram) -> float:
    """Median first-passage count among the converged samples."""
    total = hist.converged_total()
    if total == 0:
        raise ValueError("histogram has no converged samples")
    half = (total - 1) / 2.0
    seen = 0
    lower = None
    for k in sorted(hist.counts):
        seen += hist.counts[k]
        if lower is None and seen > half:
            lower = k
        if seen > total / 2.0:
            return float(k) if lower == k else (lower + k) / 2.0
    return float(lower)


def _format_value(x) -> str:
    return repr(x) if isinstance(x, float) else str(x)


def _config_items(config) -> list[tuple[str, object]]:
    if isinstance(config, ForwardExperimentConfig):
        return [
            ("seed", config.rng_seed),
            ("sample_count", config.sample_count),
            ("epsilon", config.epsilon),
            ("cap", config.max_iterations),
        ]
    return [
        ("seed", config.rng_seed),
        ("sample_count", config.sample_count),
        ("start_radius", config.start_radius),
        ("purity_threshold", config.purity_threshold),
        ("policy", config.branch_policy),
        ("cap", config.max_iterations),
    ]


def histogram_to_table(hist: ConvergenceHistogram) -> tuple[list[tuple[str, str]], list[tuple[int, int]]]:
    """Flatten a histogram into header key-value pairs and sorted rows."""
    header = [("schema_version", str(_SCHEMA_VERSION)), ("kind", hist.kind)]
    header += [(k, _format_value(v)) for k, v in _config_items(hist.config)]
    rows = [(k, hist.counts[k]) for k in sorted(hist.counts)]
    return header, rows


def write_histogram_csv(hist: ConvergenceHistogram, path) -> None:
    """Write the histogram as CSV; iteration -1 is the non-converged row."""
    header, rows = histogram_to_table(hist)
    lines = [f"# {k}={v}" for k, v in header]
    lines.append("iterations,count")
    lines += [f"{k},{c}" for k, c in rows]
    lines.append(f"-1,{hist.non_converged}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_histogram_json(hist: ConvergenceHistogram, path) -> None:
    """Write the same content as the CSV, with a stable key order."""
    header, rows = histogram_to_table(hist)
    payload = {
        "schema_version": _SCHEMA_VERSION,
        "kind": hist.kind,
        "config": dict(_config_items(hist.config)),
        "counts": [[k, c] for k, c in rows],
        "non_converged": hist.non_converged,
    }
    with open(path, "w", newline="") as fh:
        fh.write(json.dumps(payload) + "\n")
