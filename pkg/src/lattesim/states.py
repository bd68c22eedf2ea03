"""State representations shared by the pure and mixed dynamics.

Points on the extended complex plane stand for pure qubit states via
psi = (|0> + z|1>) / sqrt(1 + |z|^2), with z = infinity meaning |1>.
Bloch vectors and 2x2 density matrices carry the mixed states.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

# magnitude beyond which computations move to the reciprocal chart 1/z
CHART_SWITCH = 1e8

# slack allowed on |b| <= 1 and on density-matrix positivity
BALL_SLACK = 1e-12


@dataclass(frozen=True)
class ExtendedComplex:
    """A point of the extended complex plane; value None encodes infinity."""

    value: complex | None = 0j

    def __post_init__(self):
        if self.value is not None:
            z = complex(self.value)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError("finite point must have finite parts")
            object.__setattr__(self, "value", z)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def to_complex(self) -> complex:
        if self.value is None:
            raise ValueError("point at infinity has no complex value")
        return self.value

    def __repr__(self):
        return "ExtendedComplex(inf)" if self.value is None else f"ExtendedComplex({self.value!r})"


INFINITY = ExtendedComplex(None)


def as_point(z) -> ExtendedComplex:
    """Coerce a complex, float, or ExtendedComplex into an ExtendedComplex."""
    if isinstance(z, ExtendedComplex):
        return z
    return ExtendedComplex(complex(z))


def bloch_from_z(z) -> "BlochVector":
    """Bloch vector of the pure state labeled by z; infinity maps to (0,0,-1).

    u = 2 Re z / (1+|z|^2), v = 2 Im z / (1+|z|^2), w = (1-|z|^2)/(1+|z|^2).
    Computed in the reciprocal chart for |z| > 1 so large inputs do not
    overflow.
    """
    p = as_point(z)
    if p.is_infinite:
        return BlochVector(0.0, 0.0, -1.0)
    x = p.value
    if abs(x) <= 1.0:
        n = 1.0 + abs(x) ** 2
        return BlochVector(2.0 * x.real / n, 2.0 * x.imag / n, (1.0 - abs(x) ** 2) / n)
    r = 1.0 / x
    n = 1.0 + abs(r) ** 2
    return BlochVector(2.0 * r.real / n, -2.0 * r.imag / n, -(1.0 - abs(r) ** 2) / n)


def chordal_distance(a, b) -> float:
    """Distance between two extended-plane points on the Riemann sphere.

    Equals 2|a-b| / sqrt((1+|a|^2)(1+|b|^2)) for finite points, extended
    continuously to infinity; the sphere has diameter 2. Implemented as the
    Euclidean distance between the Bloch images, which is the same metric
    and inherits their overflow handling.
    """
    pa = bloch_from_z(a)
    pb = bloch_from_z(b)
    return math.sqrt((pa.u - pb.u) ** 2 + (pa.v - pb.v) ** 2 + (pa.w - pb.w) ** 2)


@dataclass(frozen=True)
class BlochVector:
    """Real triple (u, v, w) inside the closed unit ball."""

    u: float
    v: float
    w: float

    def __post_init__(self):
        for x in (self.u, self.v, self.w):
            if not math.isfinite(x):
                raise ValueError("Bloch components must be finite")
        if self.norm() > 1.0 + BALL_SLACK:
            raise ValueError(f"Bloch vector leaves the unit ball: |b| = {self.norm()!r}")

    def norm(self) -> float:
        return math.sqrt(self.u**2 + self.v**2 + self.w**2)

    def purity(self) -> float:
        """trace(rho^2) of the corresponding state: (|b|^2 + 1) / 2."""
        return (self.u**2 + self.v**2 + self.w**2 + 1.0) / 2.0

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w], dtype=float)


@dataclass(frozen=True)
class DensityMatrix2:
    """Single-qubit density matrix [[rho11, rho12], [conj(rho12), rho22]].

    The constructor normalizes the trace to 1 and checks Hermitian
    positivity up to a small numerical slack.
    """

    rho11: float
    rho12: complex
    rho22: float

    def __post_init__(self):
        tr = self.rho11 + self.rho22
        if not (math.isfinite(tr) and tr > 0.0):
            raise ValueError("density matrix needs a positive finite trace")
        object.__setattr__(self, "rho11", float(self.rho11) / tr)
        object.__setattr__(self, "rho12", complex(self.rho12) / tr)
        object.__setattr__(self, "rho22", float(self.rho22) / tr)
        if self.rho11 < -BALL_SLACK or self.rho22 < -BALL_SLACK:
            raise ValueError("negative population")
        if self.rho11 * self.rho22 - abs(self.rho12) ** 2 < -BALL_SLACK:
            raise ValueError("matrix is not positive semidefinite")

    def purity(self) -> float:
        return self.rho11**2 + self.rho22**2 + 2.0 * abs(self.rho12) ** 2

    def to_matrix(self) -> np.ndarray:
        return np.array(
            [[self.rho11, self.rho12], [self.rho12.conjugate(), self.rho22]],
            dtype=complex,
        )

    @classmethod
    def from_matrix(cls, m) -> "DensityMatrix2":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        if abs(m[0, 1] - m[1, 0].conjugate()) > 1e-9 or abs(m[0, 0].imag) > 1e-9 or abs(m[1, 1].imag) > 1e-9:
            raise ValueError("matrix is not Hermitian")
        return cls(m[0, 0].real, m[0, 1], m[1, 1].real)


def density_from_bloch(b: BlochVector) -> DensityMatrix2:
    """rho = (1/2)(identity + u sx + v sy + w sz)."""
    if b.norm() > 1.0 + 1e-9:
        raise ValueError("Bloch vector outside the unit ball")
    return DensityMatrix2(
        (1.0 + b.w) / 2.0,
        complex(b.u, -b.v) / 2.0,
        (1.0 - b.w) / 2.0,
    )


def bloch_from_density(rho: DensityMatrix2) -> BlochVector:
    """Exact inverse of density_from_bloch."""
    return BlochVector(
        2.0 * rho.rho12.real,
        -2.0 * rho.rho12.imag,
        rho.rho11 - rho.rho22,
    )


def z_from_bloch(b: BlochVector) -> ExtendedComplex:
    """Label of a pure Bloch point; the south pole maps to infinity.

    Only meaningful on the sphere itself. z = (u + i v) / (1 + w).
    """
    if 1.0 + b.w <= 0.0:
        return INFINITY
    return ExtendedComplex(complex(b.u, b.v) / (1.0 + b.w))
