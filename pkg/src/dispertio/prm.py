"""Deterministic PRM*: roadmap over a fixed sample set plus shortest-path queries."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dispersion import SampleSet
from .maps import ChainModel, CollisionChecker, OccupancyMap
from .space import SpaceTopology, normalize
from .steer import SteerKind, dist, dist_many, distance_matrix


class PlanningError(ValueError):
    """Start or goal state is in collision (as opposed to "no path found")."""


def connection_count(n: int, dims: int) -> int:
    """``ceil(e (1 + 1/D) ln n)`` neighbours per vertex."""
    if n < 2:
        raise ValueError("the connection rule needs n >= 2")
    if dims < 1:
        raise ValueError("dims must be positive")
    return int(math.ceil(math.e * (1.0 + 1.0 / dims) * math.log(n)))


def k_nearest(states: np.ndarray, x: Sequence[float], k: int, steer: SteerKind,
              t: SpaceTopology) -> np.ndarray:
    """Indices of the ``k`` states closest to ``x``; ties go to the lower index."""
    states = np.asarray(states, dtype=float)
    if len(states) == 0:
        raise ValueError("empty state set")
    if not 0 <= k <= len(states):
        raise ValueError("k must lie in [0, len(states)]")
    d = dist_many(x, states, steer, t)
    return np.argsort(d, kind="stable")[:k]


@dataclass
class Roadmap:
    """Undirected graph over collision-free samples.

    ``sample_index[v]`` is the position of vertex ``v`` in the source set;
    ``edges`` are sorted ``(i, j)`` pairs with ``i < j``.
    """

    topology: SpaceTopology
    steer: SteerKind
    vertices: np.ndarray
    sample_index: np.ndarray
    edges: list[tuple[int, int]]
    costs: list[float]
    k: int | None = None
    radius: float | None = None
    edges_tested: int = 0
    adjacency: list[list[tuple[int, float]]] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not self.adjacency:
            self.adjacency = _adjacency(len(self.vertices), self.edges, self.costs)

    def __len__(self) -> int:
        return len(self.vertices)


def _adjacency(n, edges, costs):
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (i, j), c in zip(edges, costs):
        adj[i].append((j, c))
        adj[j].append((i, c))
    return adj


def _neighbour_pairs(d: np.ndarray, k: int | None, radius: float | None) -> list[tuple[int, int]]:
    """Candidate edges from a distance table (diagonal ignored)."""
    n = len(d)
    pairs = set()
    for i in range(n):
        row = d[i].copy()
        row[i] = np.inf
        if radius is not None:
            near = np.flatnonzero(row <= radius)
        else:
            near = np.argsort(row, kind="stable")[:min(k, n - 1)]
        for j in near:
            j = int(j)
            pairs.add((i, j) if i < j else (j, i))
    return sorted(pairs)


def build_roadmap(s: SampleSet, m: OccupancyMap | CollisionChecker, steer: SteerKind | None = None,
                  k: int | None = None, step: float | None = None, radius: float | None = None,
                  chain: ChainModel | None = None, pairwise: np.ndarray | None = None) -> Roadmap:
    """Connect every free sample to its ``k`` nearest free samples (or all
    within ``radius``) by collision-free steer paths.

    ``k`` defaults to :func:`connection_count` of the free vertex count plus
    the start and goal vertices added at query time.
    ``pairwise`` may hold the full sample distance table to reuse across maps.
    """
    steer = steer if steer is not None else s.steer
    checker = m if isinstance(m, CollisionChecker) else CollisionChecker(m, steer, s.topology, chain, step)
    t = checker.topology
    free = np.array([i for i, x in enumerate(s.samples) if checker.state_free(x)], dtype=np.int64)
    vertices = s.samples[free]
    n = len(free)
    if radius is None and k is None:
        k = connection_count(n + 2, t.dims)  # start and goal join the vertex set
    if n < 2:
        return Roadmap(t, steer, vertices, free, [], [], k, radius)
    if pairwise is not None:
        d = pairwise[np.ix_(free, free)]
    else:
        d = distance_matrix(vertices, steer, t)
    edges, costs = [], []
    tested = 0
    for i, j in _neighbour_pairs(d, k, radius):
        tested += 1
        if checker.path_free(vertices[i], vertices[j]):
            edges.append((i, j))
            costs.append(float(d[i, j]))
    return Roadmap(t, steer, vertices, free, edges, costs, k, radius, tested)


@dataclass
class PlanResult:
    success: bool
    path: list[tuple[float, ...]]
    cost: float
    stats: dict


def _dijkstra(adj, source: int, target: int):
    """Label-setting search; predecessors change only on strict improvement."""
    best = {source: 0.0}
    pred = {source: -1}
    done = set()
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == target:
            break
        for v, c in adj[u]:
            nd = d + c
            if nd < best.get(v, math.inf):
                best[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    if target not in done:
        return None, math.inf
    path = [target]
    while pred[path[-1]] != -1:
        path.append(pred[path[-1]])
    return path[::-1], best[target]


class Planner:
    """Answers start/goal queries on one roadmap; the roadmap is not modified."""

    def __init__(self, roadmap: Roadmap, checker: CollisionChecker):
        self.roadmap = roadmap
        self.checker = checker

    def _connections(self, x, extra: np.ndarray | None):
        rm = self.roadmap
        t = self.checker.topology
        pool = rm.vertices if extra is None else np.vstack([rm.vertices, extra[None, :]])
        if len(pool) == 0:
            return []
        d = dist_many(x, pool, rm.steer, t)
        if rm.radius is not None:
            near = np.flatnonzero(d <= rm.radius)
        else:
            k = rm.k if rm.k is not None else connection_count(max(len(pool), 2), t.dims)
            near = np.argsort(d, kind="stable")[:min(k, len(pool))]
        return [(int(j), float(d[j])) for j in near]

    def query(self, start: Sequence[float], goal: Sequence[float]) -> PlanResult:
        t = self.checker.topology
        start = normalize(start, t)
        goal = normalize(goal, t)
        for name, x in (("start", start), ("goal", goal)):
            if not self.checker.state_free(x):
                raise PlanningError(f"{name} state {x} is in collision")
        rm = self.roadmap
        stats = {"vertices": len(rm) + 2, "roadmap_edges": len(rm.edges),
                 "edges_tested": rm.edges_tested, "query_edges_tested": 0}
        if start == goal:
            return PlanResult(True, [start], 0.0, stats)
        n = len(rm)
        s_id, g_id = n, n + 1
        adj = [list(a) for a in rm.adjacency] + [[], []]
        checks_before = self.checker.collision_checks
        goal_arr = np.asarray(goal)
        start_arr = np.asarray(start)
        # start may link to the goal directly; the goal links to the roadmap only
        # (the start-goal pair is considered once)
        for x_id, x, extra in ((s_id, start_arr, goal_arr), (g_id, goal_arr, None)):
            for j, c in self._connections(x, extra):
                target = g_id if j == n else j
                y = goal_arr if target == g_id else rm.vertices[j]
                if self.checker.path_free(x, y):
                    adj[x_id].append((target, c))
                    adj[target].append((x_id, c))
        stats["query_edges_tested"] = self.checker.collision_checks - checks_before
        ids, cost = _dijkstra(adj, s_id, g_id)
        if ids is None:
            return PlanResult(False, [], math.inf, stats)
        pts = [start if v == s_id else goal if v == g_id else tuple(float(c) for c in rm.vertices[v])
               for v in ids]
        return PlanResult(True, pts, float(cost), stats)


def plan(start: Sequence[float], goal: Sequence[float], s: SampleSet, m: OccupancyMap,
         steer: SteerKind | None = None, step: float | None = None, k: int | None = None,
         radius: float | None = None, chain: ChainModel | None = None) -> PlanResult:
    """Build the roadmap for ``s`` on ``m`` and answer a single query."""
    steer = steer if steer is not None else s.steer
    checker = CollisionChecker(m, steer, s.topology, chain, step)
    for name, x in (("start", start), ("goal", goal)):
        if not checker.state_free(x):
            raise PlanningError(f"{name} state {tuple(x)} is in collision")
    rm = build_roadmap(s, checker, steer, k=k, radius=radius)
    return Planner(rm, checker).query(start, goal)


def path_cost(path: Sequence[Sequence[float]], steer: SteerKind, t: SpaceTopology) -> float:
    return float(sum(dist(a, b, steer, t) for a, b in zip(path[:-1], path[1:])))


# -- text dump ----------------------------------------------------------------------

def format_roadmap(rm: Roadmap) -> str:
    lines = ["dispertio-roadmap v1", f"vertices {len(rm)}"]
    lines += [f"{i} " + " ".join(format(float(v), ".17g") for v in x) for i, x in enumerate(rm.vertices)]
    lines.append(f"edges {len(rm.edges)}")
    lines += [f"{i} {j} {format(c, '.17g')}" for (i, j), c in zip(rm.edges, rm.costs)]
    return "\n".join(lines) + "\n"


def save_roadmap(rm: Roadmap, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_roadmap(rm))
