"""Mixed-state dynamics of the protocol on the Bloch ball.

One protocol step squares the density-matrix entries, renormalizes by the
success probability, and conjugates by the balancing unitary. In Bloch
coordinates b = (u, v, w) the composite map is

    U = (u^2 - v^2) / (1 + w^2)
    V = 2w / (1 + w^2)
    W = -2uv / (1 + w^2)

It fixes the sphere (pure states stay pure), sends the interior toward the
center, and restricts on the sphere to the pure-state Lattes map. Each step
has exactly two right inverses, the branches below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import BlochVector, DensityMatrix2
from .riemann import pure_cycle_bloch_points


def squaring_step(rho: DensityMatrix2) -> tuple[DensityMatrix2, float]:
    """Square the entries of rho and renormalize.

    Returns the post-selected state and the success probability
    rho11^2 + rho22^2, which lies in [1/2, 1].
    """
    success = rho.rho11**2 + rho.rho22**2
    out = DensityMatrix2(rho.rho11**2 / success, rho.rho12**2 / success, rho.rho22**2 / success)
    return out, success


def _step_uvw(u: float, v: float, w: float) -> tuple[float, float, float]:
    # raw map on coordinates; valid slightly outside the ball too, which the
    # finite-difference checks at the sphere rely on
    h = 1.0 + w * w
    return (u * u - v * v) / h, 2.0 * w / h, -2.0 * u * v / h


def bloch_map(b: BlochVector) -> BlochVector:
    """One full protocol step on a Bloch vector."""
    return BlochVector(*_step_uvw(b.u, b.v, b.w))


def success_probability(b: BlochVector) -> float:
    """Post-selection success probability of one step starting from b."""
    # equals rho11^2 + rho22^2 = (1 + w^2) / 2
    return (1.0 + b.w * b.w) / 2.0


def _inverse_uvw(tu: float, tv: float, tw: float, sign: float) -> tuple[float, float, float]:
    """One preimage of the target (tu, tv, tw); sign +1/-1 picks the branch.

    w solves tv = 2w/(1+w^2) inside [-1, 1]:  w = tv / (1 + sqrt(1 - tv^2)),
    the cancellation-free form of (1 - sqrt(1 - tv^2)) / tv. Then
    u = sign * sqrt((1+w^2)/2 * (tu + hypot(tu, tw))) and v = -tw(1+w^2)/(2u).
    For tu < 0 the parenthesis is rewritten as tw^2 / (hypot - tu) to avoid
    cancellation; its tw -> 0 limit is the degenerate stratum u = 0,
    v = -sign * sqrt(-tu (1+w^2)).

    Targets within one ulp of the poles (tv rounded to +/-1 while tu, tw are
    not quite zero) can land the preimage a hair outside the ball; such
    points are rescaled back onto the sphere.
    """
    w = tv / (1.0 + math.sqrt((1.0 - tv) * (1.0 + tv)))
    h = 1.0 + w * w
    s = math.hypot(tu, tw)
    if tu >= 0.0:
        u = sign * math.sqrt(0.5 * h * (tu + s))
        v = 0.0 if u == 0.0 else -tw * h / (2.0 * u)
    else:
        d = s - tu
        direction = 1.0 if tw >= 0.0 else -1.0
        u = sign * abs(tw) * math.sqrt(0.5 * h / d)
        v = -sign * direction * math.sqrt(0.5 * h * d)
    norm_sq = u * u + v * v + w * w
    if 1.0 < norm_sq <= 1.0 + 1e-6:
        n = math.sqrt(norm_sq)
        u, v, w = u / n, v / n, w / n
    return u, v, w


def inverse_plus(target: BlochVector) -> BlochVector:
    """The preimage of target with u >= 0."""
    return BlochVector(*_inverse_uvw(target.u, target.v, target.w, 1.0))


def inverse_minus(target: BlochVector) -> BlochVector:
    """The preimage of target with u <= 0."""
    return BlochVector(*_inverse_uvw(target.u, target.v, target.w, -1.0))


def bloch_map_jacobian(b: BlochVector) -> np.ndarray:
    """Analytic 3x3 Jacobian of the map at b, rows d(U,V,W), columns d(u,v,w).

    At the center the only nonzero entry is dV/dw = 2, so the matrix is
    nilpotent and the center attracts even though that entry exceeds 1.
    """
    u, v, w = b.u, b.v, b.w
    h = 1.0 + w * w
    return np.array(
        [
            [2.0 * u / h, -2.0 * v / h, -2.0 * w * (u * u - v * v) / h**2],
            [0.0, 0.0, 2.0 * (1.0 - w * w) / h**2],
            [-2.0 * v / h, -2.0 * u / h, 4.0 * u * v * w / h**2],
        ]
    )


@dataclass(frozen=True)
class MixedCycle:
    """A periodic cycle of the Bloch-ball map."""

    points: tuple[BlochVector, ...]
    period: int
    residual: float


def _build_mixed(points: list[BlochVector]) -> MixedCycle:
    period = len(points)
    residual = 0.0
    for k, p in enumerate(points):
        image = bloch_map(p)
        target = points[(k + 1) % period]
        residual = max(
            residual,
            math.sqrt((image.u - target.u) ** 2 + (image.v - target.v) ** 2 + (image.w - target.w) ** 2),
        )
    return MixedCycle(tuple(points), period, residual)


def find_mixed_cycles(max_period: int) -> list[MixedCycle]:
    """Cycles of the Bloch-ball map with period <= max_period.

    The center (0,0,0) comes first, followed by the Bloch images of the
    pure cycles; every point except the center has purity 1.
    """
    center = _build_mixed([BlochVector(0.0, 0.0, 0.0)])
    return [center] + [_build_mixed(pts) for pts in pure_cycle_bloch_points(max_period)]
