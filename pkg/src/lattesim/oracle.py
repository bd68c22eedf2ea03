"""Brute-force two-qubit simulation of one protocol step.

Ground truth for the closed-form maps: take two copies of the state, apply
CNOT (first tensor factor controls, second is the target), project the
target onto |0>, renormalize, trace the target out, and optionally apply a
single-qubit unitary. No shortcut from the derived formulas is reused here.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .states import CHART_SWITCH, DensityMatrix2, ExtendedComplex, INFINITY, as_point

# basis order |00>, |01>, |10>, |11>, first factor = control
CNOT = np.array(
    [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ],
    dtype=complex,
)

# balancing unitary that turns the squaring step into the Lattes step
LATTES_UNITARY = np.array([[1, 1j], [1j, 1]], dtype=complex) / math.sqrt(2.0)

# projector onto target qubit |0>
_P0 = np.diag([1.0, 0.0, 1.0, 0.0]).astype(complex)


def _pure_amplitudes(z: ExtendedComplex) -> np.ndarray:
    # normalized (|0> + z|1>) up to a global phase; built from 1/z when z is
    # large so the norm never overflows
    if z.is_infinite:
        return np.array([0.0, 1.0], dtype=complex)
    x = z.value
    if abs(x) <= CHART_SWITCH:
        a0 = 1.0 / math.sqrt(1.0 + abs(x) ** 2)
        return np.array([a0, x * a0], dtype=complex)
    t = 1.0 / x
    a1 = 1.0 / math.sqrt(1.0 + abs(t) ** 2)
    return np.array([t * a1, a1], dtype=complex)


def oracle_step_pure(z, post_unitary: np.ndarray | None = None) -> tuple[ExtendedComplex, float]:
    """One protocol step on the pure state labeled by z.

    Returns the label of the post-step state and the post-selection
    success probability. Raises ArithmeticError if the projection removes
    the whole state, which cannot happen for a valid input.
    """
    psi = _pure_amplitudes(as_point(z))
    joint = CNOT @ np.kron(psi, psi)
    kept = np.array([joint[0], joint[2]])  # target |0> components
    success = float(np.vdot(kept, kept).real)
    if success == 0.0:
        raise ArithmeticError("post-selection discarded the entire state")
    kept = kept / math.sqrt(success)
    if post_unitary is not None:
        kept = np.asarray(post_unitary, dtype=complex) @ kept
    a, b = kept
    if a == 0:
        return INFINITY, success
    q = b / a
    if not cmath.isfinite(q):
        return INFINITY, success
    return ExtendedComplex(q), success


def oracle_step_mixed(rho: DensityMatrix2, post_unitary: np.ndarray | None = None) -> tuple[DensityMatrix2, float]:
    """One protocol step on a density matrix, by explicit 4x4 simulation."""
    r = rho.to_matrix()
    joint = np.kron(r, r)
    joint = CNOT @ joint @ CNOT.conj().T
    joint = _P0 @ joint @ _P0
    success = float(np.trace(joint).real)
    if success == 0.0:
        raise ArithmeticError("post-selection discarded the entire state")
    # partial trace over the target; only its |0> block survived
    reduced = joint[np.ix_([0, 2], [0, 2])] / success
    if post_unitary is not None:
        un = np.asarray(post_unitary, dtype=complex)
        reduced = un @ reduced @ un.conj().T
    return DensityMatrix2.from_matrix(reduced), success


def _random_sphere_labels(rng: np.random.Generator, n: int) -> list[ExtendedComplex]:
    # ratio of two standard complex Gaussians: uniform on the Riemann
    # sphere, so small, order-one, and huge magnitudes all appear
    g = rng.normal(size=(n, 4))
    out = []
    for a, b, c, d in g:
        den = complex(c, d)
        if den == 0:
            out.append(INFINITY)
            continue
        q = complex(a, b) / den
        out.append(INFINITY if not cmath.isfinite(q) else ExtendedComplex(q))
    return out


def deviation_sweep(samples: int, seed: int) -> tuple[float, float]:
    """Largest oracle-vs-closed-form deviation over seeded random inputs.

    Returns (pure, mixed): the pure deviation is the chordal distance
    between the simulated and closed-form step outputs; the mixed one is
    the Euclidean distance between their Bloch vectors.
    """
    from .bloch import bloch_map
    from .experiments import sample_ball_uniform
    from .riemann import lattes_map
    from .states import bloch_from_density, chordal_distance, density_from_bloch

    rng = np.random.default_rng(seed)
    specials = [
        ExtendedComplex(0j),
        ExtendedComplex(1 + 0j),
        ExtendedComplex(-1 + 0j),
        ExtendedComplex(1j),
        ExtendedComplex(-1j),
        INFINITY,
        ExtendedComplex(cmath.sqrt(1j)),  # pole of the map
        ExtendedComplex(1e9 + 0j),
        ExtendedComplex(complex(3e12, -2e12)),
    ]
    labels = specials + _random_sphere_labels(rng, max(samples - len(specials), 0))
    pure_dev = 0.0
    for z in labels[:samples]:
        stepped, _ = oracle_step_pure(z, LATTES_UNITARY)
        pure_dev = max(pure_dev, chordal_distance(stepped, lattes_map(z)))

    mixed_dev = 0.0
    for _ in range(samples):
        b = sample_ball_uniform(1.0, rng)
        stepped, _ = oracle_step_mixed(density_from_bloch(b), LATTES_UNITARY)
        got = bloch_from_density(stepped)
        want = bloch_map(b)
        mixed_dev = max(
            mixed_dev,
            math.sqrt((got.u - want.u) ** 2 + (got.v - want.v) ** 2 + (got.w - want.w) ** 2),
        )
    return pure_dev, mixed_dev
