import math

import numpy as np
import pytest

from oracles import allpairs_shortest, rs_rollout_distance
from dispertio.dispersion import SampleSet, dispertio
from dispertio.maps import CollisionChecker, OccupancyMap, empty_map
from dispertio.prm import (Planner, PlanningError, build_roadmap, connection_count, format_roadmap,
                           k_nearest, path_cost, plan)
from dispertio.samplers import halton
from dispertio.space import box, reeds_shepp_space, unit_square
from dispertio.steer import Euclidean, ReedsShepp, dist, steer_path

E = Euclidean()


def test_connection_count_values():
    assert math.e * (1 + 1 / 3) * math.log(100) == pytest.approx(16.69, abs=0.01)
    assert connection_count(100, 3) == 17
    assert connection_count(2, 2) == math.ceil(math.e * 1.5 * math.log(2)) == 3
    assert connection_count(2, 10**9) == math.ceil(math.e * math.log(2)) == 2
    with pytest.raises(ValueError):
        connection_count(1, 2)


def test_k_nearest_basic():
    pts = np.array([(1.0, 0.0), (2.0, 0.0)])
    t = box((-3, -3), (3, 3))
    assert k_nearest(pts, (0, 0), 1, E, t).tolist() == [0]
    assert sorted(k_nearest(pts, (0, 0), 2, E, t).tolist()) == [0, 1]
    with pytest.raises(ValueError):
        k_nearest(pts, (0, 0), 3, E, t)


def test_k_nearest_ties_lowest_index():
    pts = np.array([(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)])
    assert k_nearest(pts, (0, 0), 2, E, box((-2, -2), (2, 2))).tolist() == [0, 1]


def test_rs_nearest_differs_from_euclidean():
    t = reeds_shepp_space(10)
    origin = (5.0, 5.0, 0.0)
    pts = np.array([(5.0, 5.5, 0.0), (6.0, 5.0, 0.0)])  # sideways vs straight ahead
    assert k_nearest(pts, origin, 1, E, t).tolist() == [0]
    assert k_nearest(pts, origin, 1, ReedsShepp(1.0), t).tolist() == [1]
    brute = [rs_rollout_distance(origin, p, 1.0) for p in pts]
    assert int(np.argmin(brute)) == 1
    for b, p in zip(brute, pts):
        assert dist(origin, p, ReedsShepp(1.0), t) == pytest.approx(b, abs=1e-6)


def test_two_samples_one_edge():
    m = empty_map(4, 4)
    s = SampleSet(box((0, 0), (4, 4)), E, np.array([(1.0, 1.0), (3.0, 2.0)]), "manual")
    rm = build_roadmap(s, m, k=1)
    assert rm.edges == [(0, 1)]
    assert rm.costs == [pytest.approx(math.sqrt(5))]


def test_all_samples_blocked():
    m = OccupancyMap(np.zeros((4, 4), dtype=bool), 1.0)
    rm = build_roadmap(halton(10, box((0, 0), (4, 4))), m)
    assert len(rm) == 0 and rm.edges == []


def _two_rooms():
    passable = np.ones((10, 10), dtype=bool)
    passable[:, 5] = False
    passable[8, 5] = True  # door
    return OccupancyMap(passable, 1.0)


def test_no_edge_crosses_wall():
    m = _two_rooms()
    t = box((0, 0), (10, 10))
    rm = build_roadmap(halton(20, t), m, k=8)
    assert rm.edges
    for i, j in rm.edges:
        states = steer_path(rm.vertices[i], rm.vertices[j], E, t, 0.01).states
        cols = np.minimum((states[:, 0]).astype(int), 9)
        rows = np.minimum((states[:, 1]).astype(int), 9)
        assert m.passable[rows, cols].all()


def test_plan_start_equals_goal():
    s = halton(20, box((0, 0), (4, 4)))
    res = plan((1.0, 1.0), (1.0, 1.0), s, empty_map(4, 4))
    assert res.success and res.cost == 0.0 and res.path == [(1.0, 1.0)]


def test_plan_goal_sealed():
    passable = np.ones((9, 9), dtype=bool)
    passable[3:6, 3:6] = False
    passable[4, 4] = True
    m = OccupancyMap(passable, 1.0)
    s = halton(200, box((0, 0), (9, 9)))
    res = plan((0.5, 0.5), (4.5, 4.5), s, m)
    assert not res.success and res.path == [] and math.isinf(res.cost)


def test_plan_rejects_colliding_endpoints():
    m = _two_rooms()
    with pytest.raises(PlanningError):
        plan((5.5, 2.0), (1.0, 1.0), halton(20, box((0, 0), (10, 10))), m)


def test_plan_near_straight_line():
    t = box((0, 0), (10, 10))
    s = dispertio(500, t, E, (256, 256))
    start, goal = (1.0, 1.0), (8.5, 8.5)
    res = plan(start, goal, s, empty_map(10, 10))
    line = math.hypot(7.5, 7.5)
    assert res.success
    assert line <= res.cost <= 1.10 * line
    assert res.path[0] == start and res.path[-1] == goal
    assert res.cost == pytest.approx(path_cost(res.path, E, t), rel=1e-12)


def test_plan_rs_succeeds():
    m = empty_map(20, 20)
    t = reeds_shepp_space(20)
    res = plan((3, 3, 0), (16, 15, math.pi / 2), halton(300, t, ReedsShepp(2.0)), m, ReedsShepp(2.0))
    assert res.success
    assert res.cost >= dist((3, 3, 0), (16, 15, math.pi / 2), ReedsShepp(2.0), t)


def _instance(seed):
    rng = np.random.default_rng(seed)
    size = 8
    passable = rng.random((size, size)) > 0.2
    m = OccupancyMap(passable, 1.0)
    steer = ReedsShepp(1.0) if seed % 3 == 0 else E
    t = reeds_shepp_space(size) if seed % 3 == 0 else box((0, 0), (size, size))
    pts = t.lower + rng.random((int(rng.integers(20, 60)), t.dims)) * t.widths
    s = SampleSet(t, steer, pts, "manual")
    k = int(rng.integers(3, 8)) if seed % 2 else None
    radius = None if k else float(rng.uniform(1.5, 3.0))
    return rng, m, s, k, radius


@pytest.mark.parametrize("seed", range(50))
def test_cost_matches_allpairs(seed):
    rng, m, s, k, radius = _instance(seed)
    checker = CollisionChecker(m, s.steer, s.topology)
    rm = build_roadmap(s, checker, k=k or 5, radius=radius)
    if len(rm) < 2:
        pytest.skip("too few free samples")
    table = allpairs_shortest(len(rm), rm.edges, rm.costs)
    planner = Planner(rm, checker)
    for _ in range(3):
        i, j = (int(v) for v in rng.choice(len(rm), 2, replace=False))
        res = planner.query(rm.vertices[i], rm.vertices[j])
        if math.isinf(table[i, j]):
            assert not res.success
        else:
            assert res.success
            assert res.cost == pytest.approx(table[i, j], rel=1e-12, abs=1e-12)


def test_query_deterministic():
    _, m, s, k, radius = _instance(4)
    checker = CollisionChecker(m, s.steer, s.topology)
    rm = build_roadmap(s, checker, k=4)
    a = Planner(rm, checker).query(rm.vertices[0], rm.vertices[-1])
    rm2 = build_roadmap(s, CollisionChecker(m, s.steer, s.topology), k=4)
    b = Planner(rm2, CollisionChecker(m, s.steer, s.topology)).query(rm.vertices[0], rm.vertices[-1])
    assert (a.success, a.path, a.cost) == (b.success, b.path, b.cost)
    assert format_roadmap(rm) == format_roadmap(rm2)


def test_nested_prefixes_improve_with_fixed_radius():
    t = unit_square()
    s = dispertio(120, t, E, (64, 64))
    m = OccupancyMap(np.ones((8, 8), dtype=bool), 1 / 8)
    start, goal = (0.1, 0.15), (0.9, 0.8)
    costs = []
    for n in (20, 40, 80, 120):
        res = plan(start, goal, s.prefix(n), m, radius=0.35)
        assert res.success
        costs.append(res.cost)
    assert all(b <= a + 1e-9 for a, b in zip(costs, costs[1:]))


def test_roadmap_text():
    s = SampleSet(box((0, 0), (4, 4)), E, np.array([(1.0, 1.0), (3.0, 2.0)]), "manual")
    text = format_roadmap(build_roadmap(s, empty_map(4, 4), k=1))
    assert text.splitlines()[0] == "dispertio-roadmap v1"
    assert "edges 1" in text
