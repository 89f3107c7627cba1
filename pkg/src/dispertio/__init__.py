"""Dispersion-optimised deterministic samples for sampling-based motion planning."""

from .dispersion import (SampleSet, bordered_grid, dispertio, generate, load_sample_set,
                         measure_dispersion, save_sample_set)
from .grid import DispersionGrid, GridSaturated, argmax_cell, build_grid, init_border, update_distance_matrix
from .maps import ChainModel, CollisionChecker, OccupancyMap, parse_map, path_free, state_free
from .prm import PlanningError, PlanResult, Roadmap, build_roadmap, connection_count, k_nearest, plan
from .samplers import halton, iid_uniform, sukharev
from .space import SpaceTopology, box, contains, normalize, reeds_shepp_space, torus, unit_square
from .steer import Euclidean, ReedsShepp, dist, reeds_shepp_solve, steer_path

__all__ = [
    "ChainModel", "CollisionChecker", "DispersionGrid", "Euclidean", "GridSaturated", "OccupancyMap",
    "PlanResult", "PlanningError", "ReedsShepp", "Roadmap", "SampleSet", "SpaceTopology",
    "argmax_cell", "bordered_grid", "box", "build_grid", "build_roadmap", "connection_count",
    "contains", "dispertio", "dist", "generate", "halton", "iid_uniform", "init_border", "k_nearest",
    "load_sample_set", "measure_dispersion", "normalize", "parse_map", "path_free", "plan",
    "reeds_shepp_solve", "reeds_shepp_space", "save_sample_set", "state_free", "steer_path",
    "sukharev", "torus", "unit_square", "update_distance_matrix",
]
