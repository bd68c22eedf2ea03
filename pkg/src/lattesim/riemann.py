"""Dynamics of the degree-2 rational maps on the extended complex plane.

The protocol realizes the squaring map z -> z^2 when no unitary follows the
post-selection, and the Lattes map

    f(z) = (z^2 + i) / (i z^2 + 1)

when the balancing unitary is applied. The Lattes map's Julia set is the
whole sphere, so every periodic cycle is repelling and forward orbits are
chaotic. Closed forms for all cycles of period <= 2 are hard coded below.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Literal

from .states import (
    CHART_SWITCH,
    INFINITY,
    BlochVector,
    ExtendedComplex,
    as_point,
    bloch_from_z,
    chordal_distance,
)

Classification = Literal["repelling", "attracting", "indifferent"]


def _extended_div(num: complex, den: complex) -> ExtendedComplex:
    # Exact zero denominators and overflowing quotients both saturate to the
    # point at infinity; the chordal gap to the true value is below 1e-150.
    if den == 0:
        return INFINITY
    q = num / den
    if cmath.isfinite(q):
        return ExtendedComplex(q)
    return INFINITY


def _eval_quadratic_rational(z, a: complex, b: complex, c: complex, d: complex) -> ExtendedComplex:
    """(a z^2 + b) / (c z^2 + d) on the extended plane.

    Inputs beyond CHART_SWITCH are evaluated in the reciprocal chart so a
    single iteration never overflows.
    """
    p = as_point(z)
    if p.is_infinite:
        return _extended_div(a, c)
    x = p.value
    if abs(x) > CHART_SWITCH:
        s = (1.0 / x) ** 2
        return _extended_div(a + b * s, c + d * s)
    s = x * x
    return _extended_div(a * s + b, c * s + d)


def squaring_map(z) -> ExtendedComplex:
    """z -> z^2; the bare protocol step with no post-selection unitary."""
    return _eval_quadratic_rational(z, 1, 0, 0, 1)


def lattes_map(z) -> ExtendedComplex:
    """One step of the full protocol on pure states: (z^2+i)/(iz^2+1)."""
    return _eval_quadratic_rational(z, 1, 1j, 1j, 1)


def lattes_derivative(z) -> complex:
    """d/dz of the Lattes map: 4z / (iz^2 + 1)^2.

    For |z| > CHART_SWITCH the algebraically equal form 4 t^3 / (i + t^2)^2
    with t = 1/z avoids overflow; at infinity the derivative in the
    reciprocal chart is returned, which is 0.
    """
    p = as_point(z)
    if p.is_infinite:
        return 0j
    x = p.value
    if abs(x) > CHART_SWITCH:
        t = 1.0 / x
        return 4.0 * t**3 / (1j + t * t) ** 2
    return 4.0 * x / (1j * x * x + 1.0) ** 2


def lattes_orbit(z0, steps: int) -> list[ExtendedComplex]:
    """Forward orbit [z0, f(z0), ..., f^steps(z0)], length steps + 1."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    orbit = [as_point(z0)]
    for _ in range(steps):
        orbit.append(lattes_map(orbit[-1]))
    return orbit


def inverse_lattes_branches(w) -> tuple[ExtendedComplex, ExtendedComplex]:
    """The two preimages of w under the Lattes map: +/- sqrt((i-w)/(iw-1)).

    w = i has the single (double) preimage 0, returned twice; w = -i has
    the double preimage at infinity.
    """
    p = as_point(w)
    if p.is_infinite:
        zsq = _extended_div(-1.0, 1j)
    else:
        x = p.value
        if abs(x) > CHART_SWITCH:
            t = 1.0 / x
            zsq = _extended_div(1j * t - 1.0, 1j - t)
        else:
            zsq = _extended_div(1j - x, 1j * x - 1.0)
    if zsq.is_infinite:
        return (INFINITY, INFINITY)
    root = cmath.sqrt(zsq.value)
    return (ExtendedComplex(root), ExtendedComplex(-root))


@dataclass(frozen=True)
class PureCycle:
    """A periodic cycle of the Lattes map with its multiplier."""

    points: tuple[ExtendedComplex, ...]
    period: int
    multiplier: complex
    classification: Classification
    residual: float


def _classify(multiplier: complex) -> Classification:
    m = abs(multiplier)
    if m > 1.0:
        return "repelling"
    if m < 1.0:
        return "attracting"
    return "indifferent"


def _build_cycle(points: list[complex]) -> PureCycle:
    pts = tuple(ExtendedComplex(p) for p in points)
    mult = 1.0 + 0j
    for p in pts:
        mult *= lattes_derivative(p)
    period = len(pts)
    residual = 0.0
    for k, p in enumerate(pts):
        image = lattes_map(p)
        residual = max(residual, chordal_distance(image, pts[(k + 1) % period]))
    return PureCycle(pts, period, mult, _classify(mult), residual)


# Closed forms for every cycle of period 1 and 2. The fixed points solve
# z^3 + i z^2 - i z - 1 = 0, which factors as (z - 1)(z^2 + (1+i)z + 1);
# the 2-cycle solves the companion quadratic z^2 + (1-i)z + 1 = 0.
_ROOT_FIX = cmath.sqrt((1j - 2.0) / 2.0)
_ROOT_TWO = cmath.sqrt((-1j - 2.0) / 2.0)
_FIXED_POINTS = (
    1.0 + 0j,
    _ROOT_FIX - (1j + 1.0) / 2.0,
    -_ROOT_FIX - (1j + 1.0) / 2.0,
)
_TWO_CYCLE = (
    _ROOT_TWO + (1j - 1.0) / 2.0,
    -_ROOT_TWO + (1j - 1.0) / 2.0,
)


def find_pure_cycles(max_period: int) -> list[PureCycle]:
    """All cycles of the Lattes map with period <= max_period.

    Only periods 1 and 2 have closed forms available here; other requests
    raise ValueError. Order: the three fixed points, then the 2-cycle.
    """
    if max_period not in (1, 2):
        raise ValueError("closed forms cover max_period 1 or 2 only")
    cycles = [_build_cycle([p]) for p in _FIXED_POINTS]
    if max_period == 2:
        cycles.append(_build_cycle(list(_TWO_CYCLE)))
    return cycles


def pure_cycle_bloch_points(max_period: int) -> list[list[BlochVector]]:
    """Bloch images of the pure cycles, in find_pure_cycles order."""
    return [[bloch_from_z(p) for p in c.points] for c in find_pure_cycles(max_period)]
