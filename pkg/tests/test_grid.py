import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import border_field, cell_centers, exhaustive_field
from dispertio.grid import (GridSaturated, argmax_cell, argmax_index, border_points, build_grid,
                            cell_diagonal, init_border, load_grid, save_grid, update_distance_matrix)
from dispertio.space import SpaceTopology, box, reeds_shepp_space, torus, unit_square
from dispertio.steer import Euclidean, ReedsShepp, dist_many

A_CORNER = (2 - math.sqrt(2)) / 2  # equidistant from the center sample and two walls


def _fresh(t, res, steer, mode=None, policy="standard"):
    return init_border(build_grid(t, res, policy), steer, mode)


def test_build_grid_unit_square():
    g = build_grid(unit_square(), 4)
    assert g.n_cells == 16
    assert g.center(0) == (0.125, 0.125)
    assert np.isinf(g.values).all()


def test_build_grid_rs_heading_centers():
    g = build_grid(reeds_shepp_space(10), (8, 8, 8))
    assert g.n_cells == 512
    expected = [-math.pi + (2 * k + 1) * math.pi / 8 for k in range(8)]
    np.testing.assert_allclose(g.axis_centers(2), expected, rtol=0, atol=1e-15)


def test_build_grid_rejects_single_cell():
    with pytest.raises(ValueError):
        build_grid(unit_square(), (1, 4))
    with pytest.raises(ValueError):
        build_grid(unit_square(), (4, 4, 4))


def test_centers_match_oracle():
    t = reeds_shepp_space(4, 3)
    g = build_grid(t, (5, 3, 4))
    np.testing.assert_allclose(g.centers(), cell_centers(t, (5, 3, 4)), rtol=0, atol=1e-15)
    for i in (0, 7, 59):
        assert g.center(i) == tuple(g.centers()[i])
        assert g.cell_index(g.center(i)) == i


def test_analytic_border_values():
    g = _fresh(unit_square(), 4, Euclidean())
    assert g.values[0, 0] == 0.125
    assert g.values[1, 1] == 0.375
    assert g.border_mode == "analytic"
    np.testing.assert_array_equal(g.values, g.border)


def test_torus_has_no_border():
    g = _fresh(torus(2), 6, Euclidean())
    assert np.isinf(g.values).all()


def test_analytic_needs_euclidean():
    with pytest.raises(ValueError):
        _fresh(reeds_shepp_space(4), (4, 4, 4), ReedsShepp(1.0), "analytic")


def test_rs_border_dominates_wall_distance():
    t = reeds_shepp_space(4)
    g = _fresh(t, (8, 8, 8), ReedsShepp(1.0))
    c = g.centers()
    wall = np.minimum.reduce([c[:, 0], 4 - c[:, 0], c[:, 1], 4 - c[:, 1]])
    assert np.all(g.values.ravel() >= wall - 1e-12)


@pytest.mark.parametrize("t,res,steer,mode", [
    (unit_square(), (7, 5), Euclidean(), "analytic"),
    (unit_square(), (7, 5), Euclidean(), "border-samples"),
    (SpaceTopology((0, 0), (2, 1), (False, True)), (6, 6), Euclidean((1.0, 3.0)), "border-samples"),
    (reeds_shepp_space(4), (6, 6, 8), ReedsShepp(1.0), "border-samples"),
])
def test_border_matches_oracle(t, res, steer, mode):
    g = _fresh(t, res, steer, mode)
    np.testing.assert_array_equal(g.values.ravel(), border_field(t, res, steer, mode))


def test_border_soundness():
    """Border value <= distance from any boundary cell center + one diagonal."""
    t = reeds_shepp_space(4)
    res = (6, 6, 8)
    steer = ReedsShepp(1.0)
    g = _fresh(t, res, steer)
    diag = cell_diagonal(t, res, steer)
    centers = g.centers()
    pts, _ = border_points(g)
    bound = np.full(g.n_cells, np.inf)
    for i in np.flatnonzero(g.boundary_mask()):
        bound = np.minimum(bound, dist_many(centers[i], centers, steer, t))
    assert np.all(g.values.ravel() <= bound + diag + 1e-12)
    assert len(pts) == 2 * 6 * 8 * 2


def test_update_example():
    g = _fresh(unit_square(), (10, 9), Euclidean())
    update_distance_matrix(g, (0.5, 0.5), Euclidean())
    i = g.cell_index((0.25, 0.5))
    assert g.center(i) == pytest.approx((0.25, 0.5), abs=1e-15)
    assert g.values.flat[i] == 0.25


def test_update_idempotent():
    g = _fresh(unit_square(), 16, Euclidean())
    update_distance_matrix(g, (0.3, 0.6), Euclidean())
    before = g.values.copy()
    r = update_distance_matrix(g, (0.3, 0.6), Euclidean())
    assert r.improved == 0
    np.testing.assert_array_equal(g.values, before)


def test_update_rejects_outside():
    g = _fresh(unit_square(), 4, Euclidean())
    with pytest.raises(ValueError):
        update_distance_matrix(g, (1.5, 0.5), Euclidean())


def test_flood_fill_matches_exhaustive_8x8():
    t, res, steer = unit_square(), (8, 8), Euclidean()
    g = _fresh(t, res, steer)
    rng = np.random.default_rng(0)
    pts = rng.random((6, 2))
    for p in pts:
        update_distance_matrix(g, p, steer)
    np.testing.assert_array_equal(g.values, exhaustive_field(pts, t, res, steer))


def test_touched_border_flag():
    g = _fresh(unit_square(), 8, Euclidean())
    assert update_distance_matrix(g, (0.06, 0.5625), Euclidean()).touched_border
    g = _fresh(unit_square(), 64, Euclidean())
    update_distance_matrix(g, (0.5, 0.5), Euclidean())
    assert not update_distance_matrix(g, (0.5, 0.52), Euclidean()).touched_border


unit = st.floats(0, 1)
SPACES = {
    "square": (unit_square(), (9, 7), Euclidean()),
    "weighted-cylinder": (SpaceTopology((0, -1), (2, 1), (False, True)), (8, 6), Euclidean((1.0, 0.5))),
    "torus": (torus(2), (6, 7), Euclidean()),
    "box3": (box((0, 0, 0), (1, 2, 1)), (5, 6, 4), Euclidean()),
    "rs": (reeds_shepp_space(4), (6, 6, 8), ReedsShepp(1.0)),
    "rs-tight": (reeds_shepp_space(6, 3), (8, 4, 6), ReedsShepp(0.5)),
}


@given(st.sampled_from(sorted(SPACES)), st.lists(st.tuples(unit, unit, unit), min_size=1, max_size=6))
def test_flood_fill_equivalence(name, raw):
    t, res, steer = SPACES[name]
    pts = t.lower + np.array(raw)[:, : t.dims] * t.widths
    g = _fresh(t, res, steer)
    prev = g.values.copy()
    for p in pts:
        update_distance_matrix(g, p, steer)
        assert np.all(g.values <= prev)
        prev = g.values.copy()
    np.testing.assert_array_equal(g.values, exhaustive_field(pts, t, res, steer))


def test_conservative_policy_matches_exhaustive():
    t, res, steer = reeds_shepp_space(4), (6, 6, 6), ReedsShepp(1.0)
    g = _fresh(t, res, steer, policy="conservative")
    rng = np.random.default_rng(4)
    pts = t.lower + rng.random((5, 3)) * t.widths
    for p in pts:
        update_distance_matrix(g, p, steer)
    np.testing.assert_array_equal(g.values, exhaustive_field(pts, t, res, steer))
    assert g.margin(steer) > _fresh(t, res, steer).margin(steer)


def test_argmax_center_for_odd_resolution():
    g = _fresh(unit_square(), 9, Euclidean())
    assert argmax_cell(g) == (0.5, 0.5)


def test_argmax_after_center_sample():
    t, res, steer = unit_square(), (128, 128), Euclidean()  # dyadic centers: exact ties
    g = _fresh(t, res, steer)
    update_distance_matrix(g, (0.5, 0.5), steer)
    field = exhaustive_field([(0.5, 0.5)], t, res, steer)
    i = argmax_index(g)
    assert i == int(np.argmax(field))
    x, y = g.center(i)
    diag = cell_diagonal(t, res, steer)
    assert abs(g.values.flat[i] - A_CORNER) <= diag
    assert math.hypot(x - A_CORNER, y - A_CORNER) <= diag
    # the four symmetric corners tie; C order picks the one with smallest x, then y
    assert x < 0.5 and y < 0.5


def test_argmax_tie_break_uniform():
    g = build_grid(unit_square(), 5)
    g.values[...] = 1.0
    assert argmax_index(g) == 0


def test_argmax_saturated():
    g = build_grid(unit_square(), 3)
    g.values[...] = 0.0
    with pytest.raises(GridSaturated):
        argmax_index(g)


def test_determinism():
    t, res, steer = reeds_shepp_space(4), (8, 8, 8), ReedsShepp(1.0)
    rng = np.random.default_rng(9)
    pts = t.lower + rng.random((10, 3)) * t.widths
    a, b = _fresh(t, res, steer), _fresh(t, res, steer)
    for p in pts:
        update_distance_matrix(a, p, steer)
    update_distance_matrix(b, pts[0], steer)  # unrelated ordering of scratch state
    b.reset()
    for p in pts:
        update_distance_matrix(b, p, steer)
    assert a.values.tobytes() == b.values.tobytes()


def test_copy_is_independent():
    g = _fresh(unit_square(), 8, Euclidean())
    h = g.copy()
    update_distance_matrix(h, (0.5, 0.5), Euclidean())
    np.testing.assert_array_equal(g.values, g.border)
    assert not np.array_equal(h.values, g.values)


def test_grid_round_trip(tmp_path):
    t, steer = reeds_shepp_space(4), ReedsShepp(1.0)
    g = _fresh(t, (4, 4, 6), steer)
    update_distance_matrix(g, (1.0, 2.0, 0.3), steer)
    save_grid(g, tmp_path / "g.grid")
    h = load_grid(tmp_path / "g.grid")
    assert h.topology == t and h.resolution == g.resolution and h.steer == steer
    assert h.values.tobytes() == g.values.tobytes()
    assert (tmp_path / "g.grid").read_bytes().startswith(b"dispertio-grid v1\n")
