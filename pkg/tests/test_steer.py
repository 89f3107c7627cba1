import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import random_control_path
from dispertio.space import reeds_shepp_space, torus, unit_square, box
from dispertio.steer import (Euclidean, ReedsShepp, dist, dist_many, distance_matrix, parse_steer,
                             reeds_shepp_solve, steer_path)

RS_SPACE = reeds_shepp_space(10)
angle = st.floats(-math.pi, math.pi, exclude_max=True)
coord = st.floats(0, 10)
rs_state = st.tuples(coord, coord, angle)


def _random_rs(rng, n):
    return np.column_stack([rng.uniform(0, 10, n), rng.uniform(0, 10, n), rng.uniform(-math.pi, math.pi, n)])


def test_euclidean_pythagoras():
    assert dist((0, 0), (3, 4), Euclidean(), box((0, 0), (5, 5))) == 5.0


def test_weighted_euclidean():
    assert dist((0, 0), (1, 1), Euclidean((1.0, 2.0)), unit_square()) == pytest.approx(math.sqrt(5), abs=1e-15)


def test_euclidean_wraps_on_torus():
    t = torus(1)
    assert dist((-3.0,), (3.0,), Euclidean(), t) == pytest.approx(2 * math.pi - 6.0, abs=1e-12)


def test_rs_aligned_straight():
    assert dist((0, 0, 0), (2, 0, 0), ReedsShepp(1.0), RS_SPACE) == pytest.approx(2.0, abs=1e-12)
    w = reeds_shepp_solve((0, 0, 0), (2, 0, 0), 1.0)
    assert w.letters == ("S",) and w.segments == pytest.approx((2.0,))


def test_rs_turn_in_place():
    # Pinned from the shooting oracle (tests/oracles.py): three arcs of pi/3 each.
    d = dist((0, 0, 0), (0, 0, math.pi), ReedsShepp(1.0), RS_SPACE)
    assert d == pytest.approx(math.pi, abs=1e-9)
    w = reeds_shepp_solve((0, 0, 0), (0, 0, math.pi), 1.0)
    assert len(w.letters) == 3
    assert all(abs(abs(v) - math.pi / 3) < 1e-9 for v in w.segments)


def test_rs_goal_equals_start():
    w = reeds_shepp_solve((1, 2, 0.3), (1, 2, 0.3), 2.0)
    assert w.length == 0.0 and w.letters == ()


def test_rs_scales_with_radius():
    a, b = (0, 0, 0.2), (3, -1, 2.0)
    d1 = dist(a, b, ReedsShepp(1.0), RS_SPACE)
    big = reeds_shepp_space(100)
    d5 = dist((0, 0, 0.2), (15, -5, 2.0), ReedsShepp(5.0), big)
    assert d5 == pytest.approx(5 * d1, rel=1e-12)


def test_parse_steer_round_trip():
    for s in (Euclidean(), Euclidean((1.0, 0.5)), ReedsShepp(1.0), ReedsShepp(5.0)):
        assert parse_steer(str(s)) == s
    assert parse_steer("rs:2") == ReedsShepp(2.0)
    with pytest.raises(ValueError):
        parse_steer("dubins:1")
    with pytest.raises(ValueError):
        ReedsShepp(0.0)


def test_symmetry_1000_pairs():
    rng = np.random.default_rng(7)
    a, b = _random_rs(rng, 1000), _random_rs(rng, 1000)
    for steer in (ReedsShepp(1.0), ReedsShepp(2.5)):
        for p, q in zip(a, b):
            assert abs(dist(p, q, steer, RS_SPACE) - dist(q, p, steer, RS_SPACE)) <= 1e-9
    e = Euclidean()
    for p, q in zip(a, b):
        assert abs(dist(p, q, e, RS_SPACE) - dist(q, p, e, RS_SPACE)) <= 1e-9


@given(rs_state, rs_state, rs_state)
def test_triangle_inequality(a, b, c):
    for steer in (ReedsShepp(1.0), Euclidean()):
        assert dist(a, c, steer, RS_SPACE) <= dist(a, b, steer, RS_SPACE) + dist(b, c, steer, RS_SPACE) + 1e-9


@given(rs_state, rs_state)
def test_rs_dominates_euclidean_position(a, b):
    d = dist(a, b, ReedsShepp(1.5), RS_SPACE)
    assert d >= math.hypot(a[0] - b[0], a[1] - b[1]) - 1e-12


def test_rs_never_beats_random_controls():
    """The closed form is a lower bound on every admissible bang-bang path."""
    rng = np.random.default_rng(11)
    big = reeds_shepp_space(100)
    for _ in range(1000):
        a = (rng.uniform(40, 60), rng.uniform(40, 60), rng.uniform(-math.pi, math.pi))
        rho = float(rng.choice([0.5, 1.0, 2.0]))
        end, length = random_control_path(a, rho, rng)
        assert dist(a, end, ReedsShepp(rho), big) <= length + 1e-9


def test_dist_many_and_matrix_agree():
    rng = np.random.default_rng(2)
    pts = _random_rs(rng, 30)
    for steer in (ReedsShepp(1.0), Euclidean()):
        m = distance_matrix(pts, steer, RS_SPACE)
        assert np.array_equal(m, m.T) or np.allclose(m, m.T, atol=1e-9)
        np.testing.assert_array_equal(np.diag(m), 0.0)
        row = dist_many(pts[3], pts, steer, RS_SPACE)
        for j, q in enumerate(pts):
            assert row[j] == dist(pts[3], q, steer, RS_SPACE)


def test_steer_path_euclidean():
    p = steer_path((0, 0), (1, 0), Euclidean(), box((0, 0), (2, 2)), 0.25)
    assert p.length == 1.0
    np.testing.assert_allclose(p.states, [[0, 0], [0.25, 0], [0.5, 0], [0.75, 0], [1, 0]])


def test_steer_path_degenerate():
    p = steer_path((0.3, 0.4), (0.3, 0.4), Euclidean(), unit_square(), 0.1)
    assert p.length == 0.0 and p.states.shape == (1, 2)
    with pytest.raises(ValueError):
        steer_path((0, 0), (1, 1), Euclidean(), unit_square(), 0.0)


def test_rs_path_curvature_and_endpoint():
    rho, step = 1.0, 0.01
    a, b = (0, 0, 0), (4, 4, math.pi / 2)
    p = steer_path(a, b, ReedsShepp(rho), RS_SPACE, step)
    word = reeds_shepp_solve(a, b, rho)
    assert p.length == pytest.approx(word.length, abs=1e-12)
    assert np.abs(p.states[-1] - np.array(b)).max() < 1e-6
    ds = p.length / (len(p.states) - 1)
    dth = np.abs((np.diff(p.states[:, 2]) + math.pi) % (2 * math.pi) - math.pi)
    chords = np.hypot(*np.diff(p.states[:, :2], axis=0).T)
    # heading turns at most ds / rho per arc step, and the chord never exceeds the arc
    assert dth.max() <= ds / rho + 1e-9
    assert chords.max() <= ds + 1e-9
    # finite-difference curvature over chords, with the chord/arc correction
    bent = dth > 1e-12
    kappa = 2 * np.sin(dth[bent] / 2) / chords[bent]
    assert kappa.max() <= 1 / rho + 1e-6


def test_rs_path_interior_consistency():
    rng = np.random.default_rng(5)
    steer = ReedsShepp(1.0)
    for _ in range(40):
        a, b = _random_rs(rng, 2)
        p = steer_path(a, b, steer, RS_SPACE, 0.05)
        pieces = sum(dist(p.states[i], p.states[i + 1], steer, RS_SPACE) for i in range(len(p.states) - 1))
        assert pieces == pytest.approx(p.length, rel=1e-6)


@given(st.tuples(st.floats(0, 1), st.floats(0, 1)), st.tuples(st.floats(0, 1), st.floats(0, 1)))
def test_euclidean_path_consistency(a, b):
    t = unit_square()
    p = steer_path(a, b, Euclidean(), t, 0.1)
    pieces = sum(dist(p.states[i], p.states[i + 1], Euclidean(), t) for i in range(len(p.states) - 1))
    assert pieces == pytest.approx(p.length, rel=1e-6, abs=1e-12)
