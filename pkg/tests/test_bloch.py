import math

import numpy as np
import pytest
from hypothesis import example, given, strategies as st

from lattesim.bloch import (
    _inverse_uvw,
    _step_uvw,
    bloch_map,
    bloch_map_jacobian,
    find_mixed_cycles,
    inverse_minus,
    inverse_plus,
    squaring_step,
    success_probability,
)
from lattesim.states import (
    BlochVector,
    DensityMatrix2,
    bloch_from_density,
    density_from_bloch,
)

unit = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


@st.composite
def ball_points(draw):
    u, v, w = draw(unit), draw(unit), draw(unit)
    n = math.sqrt(u * u + v * v + w * w)
    if n > 1.0:
        u, v, w = u / n, v / n, w / n
    return BlochVector(u, v, w)


@st.composite
def sphere_points(draw):
    u = draw(st.floats(min_value=-1.0, max_value=1.0, allow_nan=False))
    v = draw(st.floats(min_value=-1.0, max_value=1.0, allow_nan=False))
    w = draw(st.floats(min_value=-1.0, max_value=1.0, allow_nan=False))
    n = math.sqrt(u * u + v * v + w * w)
    if n == 0.0:
        return BlochVector(0.0, 0.0, 1.0)
    return BlochVector(u / n, v / n, w / n)


def euclid(a: BlochVector, b: BlochVector) -> float:
    return math.sqrt((a.u - b.u) ** 2 + (a.v - b.v) ** 2 + (a.w - b.w) ** 2)


class TestSquaringStep:
    def test_maximally_mixed_is_fixed(self):
        out, success = squaring_step(DensityMatrix2(0.5, 0j, 0.5))
        assert success == 0.5
        assert out.rho11 == 0.5 and out.rho22 == 0.5 and out.rho12 == 0j

    def test_populations_three_quarters(self):
        out, success = squaring_step(DensityMatrix2(0.75, 0j, 0.25))
        assert success == pytest.approx(0.625)
        assert out.rho11 == pytest.approx(0.9)
        assert out.rho22 == pytest.approx(0.1)

    def test_pure_x_state_is_fixed(self):
        out, success = squaring_step(DensityMatrix2(0.5, 0.5 + 0j, 0.5))
        assert success == pytest.approx(0.5)
        assert out.rho11 == pytest.approx(0.5)
        assert out.rho12 == pytest.approx(0.5 + 0j)

    @given(ball_points())
    def test_success_bounds(self, b):
        _, success = squaring_step(density_from_bloch(b))
        assert 0.5 - 1e-12 <= success <= 1.0 + 1e-12

    @given(ball_points())
    def test_success_matches_bloch_formula(self, b):
        _, success = squaring_step(density_from_bloch(b))
        assert success == pytest.approx(success_probability(b), abs=1e-12)

    @given(ball_points())
    def test_composes_to_bloch_map_after_axis_swap(self, b):
        # the balancing unitary turns (a, b, c) into (a, c, -b); squaring
        # alone accounts for the rest of the step
        sq = bloch_from_density(squaring_step(density_from_bloch(b))[0])
        full = bloch_map(b)
        assert full.u == pytest.approx(sq.u, abs=1e-12)
        assert full.v == pytest.approx(sq.w, abs=1e-12)
        assert full.w == pytest.approx(-sq.v, abs=1e-12)


class TestBlochMap:
    def test_center_is_fixed(self):
        out = bloch_map(BlochVector(0.0, 0.0, 0.0))
        assert (out.u, out.v, out.w) == (0.0, 0.0, 0.0)

    def test_x_pole_is_fixed(self):
        out = bloch_map(BlochVector(1.0, 0.0, 0.0))
        assert (out.u, out.v, out.w) == (1.0, 0.0, 0.0)

    def test_north_pole_moves_to_equator(self):
        out = bloch_map(BlochVector(0.0, 0.0, 1.0))
        assert out.u == 0.0 and out.v == 1.0 and out.w == 0.0

    def test_two_cycle_swap(self):
        cycles = find_mixed_cycles(2)
        a, b = cycles[4].points
        assert euclid(bloch_map(a), b) < 1e-14
        assert euclid(bloch_map(b), a) < 1e-14

    @given(ball_points())
    def test_preserves_ball(self, b):
        out = bloch_map(b)
        assert out.norm() <= 1.0 + 1e-12

    @given(sphere_points())
    def test_preserves_sphere(self, b):
        out = bloch_map(b)
        assert out.norm() == pytest.approx(1.0, abs=1e-12)

    @given(ball_points())
    def test_purity_never_decreases_much(self, b):
        # interior contraction toward the center is not monotone in norm,
        # but the image purity stays within the physical range
        out = bloch_map(b)
        assert 0.5 - 1e-12 <= out.purity() <= 1.0 + 1e-12

    def test_interior_sweep_reaches_center(self):
        rng = np.random.default_rng(20)
        worst = 0
        for _ in range(200):
            vec = rng.normal(size=3)
            vec *= 0.9 * rng.uniform() ** (1.0 / 3.0) / np.linalg.norm(vec)
            b = BlochVector(*vec)
            steps = 0
            while b.norm() > 1e-3 and steps < 2000:
                b = bloch_map(b)
                steps += 1
            worst = max(worst, steps)
            assert b.norm() <= 1e-3
        assert worst < 2000


class TestInverseBranches:
    def test_center_preimage_is_center(self):
        for branch in (inverse_plus, inverse_minus):
            out = branch(BlochVector(0.0, 0.0, 0.0))
            assert (out.u, out.v, out.w) == (0.0, 0.0, 0.0)

    def test_x_pole_preimages(self):
        t = BlochVector(1.0, 0.0, 0.0)
        assert (inverse_plus(t).u, inverse_plus(t).v, inverse_plus(t).w) == (1.0, 0.0, 0.0)
        assert (inverse_minus(t).u, inverse_minus(t).v, inverse_minus(t).w) == (-1.0, 0.0, 0.0)

    def test_equator_v_preimage_is_north_pole(self):
        t = BlochVector(0.0, 1.0, 0.0)
        for branch in (inverse_plus, inverse_minus):
            out = branch(t)
            assert out.u == 0.0 and out.w == 1.0

    def test_branch_sign_conventions(self):
        rng = np.random.default_rng(9)
        for _ in range(500):
            vec = rng.normal(size=3)
            vec *= rng.uniform() ** (1.0 / 3.0) / np.linalg.norm(vec)
            t = bloch_map(BlochVector(*vec))
            assert inverse_plus(t).u >= 0.0
            assert inverse_minus(t).u <= 0.0

    def test_degenerate_stratum_signs(self):
        # targets with W = 0 and U < 0 pull back to the u = 0 plane
        t = BlochVector(-0.3, 0.2, 0.0)
        p, m = inverse_plus(t), inverse_minus(t)
        assert p.u == 0.0 and m.u == 0.0
        assert p.v < 0.0 < m.v
        assert euclid(bloch_map(p), t) < 1e-12
        assert euclid(bloch_map(m), t) < 1e-12

    def test_tiny_w_component_matches_stratum_limit(self):
        base = _inverse_uvw(-0.3, 0.2, 0.0, 1.0)
        for tw in (1e-300, -1e-300):
            u, v, w = _inverse_uvw(-0.3, 0.2, tw, 1.0)
            assert w == base[2]
            assert abs(u) < 1e-140
            assert abs(abs(v) - abs(base[1])) < 1e-12

    def test_tiny_v_component_keeps_precision(self):
        # naive (1 - sqrt(1 - tv^2)) / tv collapses to 0 here
        u, v, w = _inverse_uvw(0.5, 1e-9, 0.1, 1.0)
        assert w == pytest.approx(5e-10, rel=1e-12)
        assert 2.0 * w / (1.0 + w * w) == pytest.approx(1e-9, rel=1e-12)

    def test_extreme_v_component(self):
        for tv in (1.0, -1.0):
            u, v, w = _inverse_uvw(0.0, tv, 0.0, 1.0)
            assert w == tv
            assert u == 0.0 and v == 0.0

    @given(ball_points())
    @example(BlochVector(0.0, 0.0, 0.0))
    @example(BlochVector(-1.0, 0.0, 0.0))
    @example(BlochVector(0.3, 0.0, -0.9))
    def test_roundtrip_on_images(self, source):
        t = bloch_map(source)
        for branch in (inverse_plus, inverse_minus):
            assert euclid(bloch_map(branch(t)), t) < 1e-10

    def test_roundtrip_sweep(self):
        rng = np.random.default_rng(77)
        worst = 0.0
        for _ in range(5000):
            vec = rng.normal(size=3)
            vec *= rng.uniform() ** (1.0 / 3.0) / np.linalg.norm(vec)
            t = bloch_map(BlochVector(*vec))
            for branch in (inverse_plus, inverse_minus):
                worst = max(worst, euclid(bloch_map(branch(t)), t))
        assert worst < 1e-12

    @given(sphere_points())
    def test_sphere_targets_have_sphere_preimages(self, source):
        t = bloch_map(source)
        for branch in (inverse_plus, inverse_minus):
            assert branch(t).norm() == pytest.approx(1.0, abs=1e-9)


class TestJacobian:
    def test_center_is_nilpotent(self):
        j = bloch_map_jacobian(BlochVector(0.0, 0.0, 0.0))
        expected = np.zeros((3, 3))
        expected[1, 2] = 2.0
        assert np.array_equal(j, expected)
        assert np.array_equal(j @ j, np.zeros((3, 3)))

    def test_x_pole_values(self):
        j = bloch_map_jacobian(BlochVector(1.0, 0.0, 0.0))
        expected = np.array([[2.0, 0.0, 0.0], [0.0, 0.0, 2.0], [0.0, -2.0, 0.0]])
        assert np.array_equal(j, expected)
        eig = sorted(np.linalg.eigvals(j), key=lambda x: (round(x.real, 9), round(x.imag, 9)))
        assert eig == pytest.approx([-2j, 2j, 2.0 + 0j], abs=1e-12)

    @pytest.mark.parametrize(
        "point",
        [
            (0.0, 0.0, 0.0),
            (1.0, 0.0, 0.0),
            (0.2, -0.5, 0.3),
            (-0.7, 0.1, -0.6),
            (0.0, 0.0, 0.99),
        ],
    )
    def test_matches_finite_differences(self, point):
        j = bloch_map_jacobian(BlochVector(*point))
        h = 1e-6
        for col in range(3):
            lo = list(point)
            hi = list(point)
            lo[col] -= h
            hi[col] += h
            fd = (np.array(_step_uvw(*hi)) - np.array(_step_uvw(*lo))) / (2.0 * h)
            assert np.max(np.abs(fd - j[:, col])) < 1e-6


KNOWN_CYCLES = [
    [(0.0, 0.0, 0.0)],
    [(1.0, 0.0, 0.0)],
    [(-0.382, 0.786, 0.486)],
    [(-0.382, -0.786, -0.486)],
    [(-0.382, -0.786, 0.486), (-0.382, 0.786, -0.486)],
]


class TestMixedCycles:
    def test_center_listed_first(self):
        cycles = find_mixed_cycles(2)
        assert len(cycles) == 5
        assert cycles[0].period == 1
        assert cycles[0].points[0].norm() == 0.0

    def test_known_coordinates(self):
        cycles = find_mixed_cycles(2)
        for cycle, want_cycle in zip(cycles, KNOWN_CYCLES):
            assert cycle.period == len(want_cycle)
            for b, want in zip(cycle.points, want_cycle):
                assert abs(b.u - want[0]) < 5e-4
                assert abs(b.v - want[1]) < 5e-4
                assert abs(b.w - want[2]) < 5e-4

    def test_residuals(self):
        for cycle in find_mixed_cycles(2):
            assert cycle.residual < 1e-12

    def test_noncenter_points_are_pure(self):
        for cycle in find_mixed_cycles(2)[1:]:
            for b in cycle.points:
                assert b.purity() == pytest.approx(1.0, abs=1e-12)

    def test_period_one_only(self):
        assert len(find_mixed_cycles(1)) == 4
