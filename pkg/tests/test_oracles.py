import ast
import math
import pathlib

import numpy as np
import pytest

import oracles
from oracles import allpairs_shortest, border_field, exhaustive_dispersion, rs_rollout_distance
from dispertio.space import reeds_shepp_space, unit_square
from dispertio.steer import Euclidean, ReedsShepp, dist


def test_oracles_do_not_import_validated_code():
    tree = ast.parse(pathlib.Path(oracles.__file__).read_text())
    modules = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            modules.add(node.module)
        elif isinstance(node, ast.Import):
            modules.update(a.name for a in node.names)
    assert {m for m in modules if m.startswith("dispertio")} == {"dispertio.steer"}


def test_empty_set_gives_max_border():
    t, res = unit_square(), (9, 9)
    assert exhaustive_dispersion([], t, res, Euclidean()) == border_field(t, res, Euclidean(), "analytic").max()
    assert exhaustive_dispersion([], t, res, Euclidean()) == 0.5


def test_oversize_grid_rejected():
    with pytest.raises(ValueError):
        exhaustive_dispersion([], unit_square(), (1001, 1000), Euclidean())


def test_rollout_aligned_goal():
    for res in (3, 5):
        assert rs_rollout_distance((0, 0, 0), (2, 0, 0), 1.0, resolution=res) == pytest.approx(2.0, abs=1e-9)
    assert rs_rollout_distance((1, 1, 0.5), (1, 1, 0.5), 1.0) == 0.0


def test_rollout_turn_in_place():
    assert rs_rollout_distance((0, 0, 0), (0, 0, math.pi), 1.0) == pytest.approx(math.pi, abs=1e-9)


def test_rollout_is_an_upper_bound():
    rng = np.random.default_rng(31)
    t = reeds_shepp_space(100)
    for _ in range(5):
        a = (*rng.uniform(0, 6, 2), rng.uniform(-math.pi, math.pi))
        b = (*rng.uniform(0, 6, 2), rng.uniform(-math.pi, math.pi))
        o = rs_rollout_distance(a, b, 1.0, resolution=3, iterations=30)
        assert o >= dist(a, b, ReedsShepp(1.0), t) - 1e-9


def test_allpairs_small_graphs():
    np.testing.assert_array_equal(allpairs_shortest(2, [(0, 1)], [2.5]), [[0, 2.5], [2.5, 0]])
    d = allpairs_shortest(3, [(0, 1)], [1.0])
    assert math.isinf(d[0, 2]) and math.isinf(d[2, 1])
    d = allpairs_shortest(3, [(0, 1), (1, 2), (0, 2)], [1.0, 1.0, 5.0])
    assert d[0, 2] == 2.0
    with pytest.raises(ValueError):
        allpairs_shortest(501, [], [])
