"""Occupancy maps (moving-ai text format), kinematic chains and collision checks.

Map coordinates: the cell in map row ``r`` (0 = first map line) and column
``c`` covers ``x in [c*cs, (c+1)*cs)`` and ``y in [r*cs, (r+1)*cs)``, with the
outer edges ``x = W*cs`` and ``y = H*cs`` belonging to the last cells.
Robots are points (Euclidean and Reeds-Shepp use the ``(x, y)`` position);
the planar chain is checked link by link at half-cell spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from . import reeds_shepp as rs
from .space import SpaceTopology, box, normalize, reeds_shepp_space, torus
from .steer import Euclidean, ReedsShepp, SteerKind, metric_params, steer_path

PASSABLE_CHARS = frozenset(".G")
BLOCKED_CHARS = frozenset("@OT")


@dataclass(frozen=True)
class OccupancyMap:
    """Workspace grid; ``passable[row, col]`` with row 0 the first map line."""

    passable: np.ndarray
    cell_size: float = 1.0

    def __post_init__(self):
        grid = np.array(self.passable, dtype=np.bool_)
        if grid.ndim != 2 or grid.size == 0:
            raise ValueError("passable must be a non-empty 2D array")
        if not self.cell_size > 0:
            raise ValueError("cell_size must be positive")
        grid.setflags(write=False)
        object.__setattr__(self, "passable", grid)
        object.__setattr__(self, "cell_size", float(self.cell_size))

    @property
    def height(self) -> int:
        return self.passable.shape[0]

    @property
    def width(self) -> int:
        return self.passable.shape[1]

    @property
    def extent(self) -> tuple[float, float]:
        return self.width * self.cell_size, self.height * self.cell_size

    def free_fraction(self) -> float:
        return float(self.passable.mean())

    def __eq__(self, other):
        return (isinstance(other, OccupancyMap) and self.cell_size == other.cell_size
                and np.array_equal(self.passable, other.passable))

    def __hash__(self):
        return hash((self.passable.shape, self.passable.tobytes(), self.cell_size))


def empty_map(width: int, height: int, cell_size: float = 1.0) -> OccupancyMap:
    return OccupancyMap(np.ones((height, width), dtype=bool), cell_size)


def map_space(m: OccupancyMap, steer: SteerKind) -> SpaceTopology:
    """Configuration space of a point robot over the map's extent."""
    w, h = m.extent
    if isinstance(steer, ReedsShepp):
        return reeds_shepp_space(w, h)
    return box((0.0, 0.0), (w, h))


# -- moving-ai text format --------------------------------------------------------

def parse_map(text: str, cell_size: float = 1.0) -> OccupancyMap:
    lines = text.splitlines()
    header = {}
    i = 0
    while i < len(lines) and lines[i].strip() != "map":
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        key, _, value = line.partition(" ")
        if key not in ("type", "height", "width") or not value.strip():
            raise ValueError(f"malformed map header line {line!r}")
        header[key] = value.strip()
    if i == len(lines):
        raise ValueError("missing 'map' line")
    if set(header) != {"type", "height", "width"}:
        raise ValueError("map header needs type, height and width")
    try:
        height, width = int(header["height"]), int(header["width"])
    except ValueError:
        raise ValueError("height and width must be integers") from None
    if height <= 0 or width <= 0:
        raise ValueError("map height and width must be positive")
    rows = [ln.rstrip("\r") for ln in lines[i + 1:]]
    while rows and not rows[-1]:
        rows.pop()
    if len(rows) != height:
        raise ValueError(f"expected {height} map rows, found {len(rows)}")
    passable = np.zeros((height, width), dtype=bool)
    for r, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"row {r} has {len(row)} cells, expected {width}")
        for c, ch in enumerate(row):
            if ch in PASSABLE_CHARS:
                passable[r, c] = True
            elif ch not in BLOCKED_CHARS:
                raise ValueError(f"unknown map character {ch!r} at row {r}, column {c}")
    return OccupancyMap(passable, cell_size)


def format_map(m: OccupancyMap) -> str:
    """Canonical text: ``.`` for passable and ``@`` for blocked cells."""
    rows = ["".join("." if v else "@" for v in row) for row in m.passable]
    return "\n".join(["type octile", f"height {m.height}", f"width {m.width}", "map"] + rows) + "\n"


def load_map(path, cell_size: float = 1.0) -> OccupancyMap:
    with open(path, encoding="ascii") as fh:
        return parse_map(fh.read(), cell_size)


def save_map(m: OccupancyMap, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_map(m))


# -- kinematic chain ----------------------------------------------------------------

@dataclass(frozen=True)
class ChainModel:
    """Planar serial chain with relative joint angles.

    ``joint_step`` is the default collision-check spacing along joint-space
    paths (2-norm of the angle change).
    """

    link_lengths: tuple[float, ...] = (1.0,) * 6
    base: tuple[float, float] = (0.0, 0.0)
    joint_step: float = 0.05

    def __post_init__(self):
        links = tuple(float(v) for v in self.link_lengths)
        if len(links) != 6 or any(v <= 0 for v in links):
            raise ValueError("a chain has 6 links of positive length")
        object.__setattr__(self, "link_lengths", links)
        object.__setattr__(self, "base", (float(self.base[0]), float(self.base[1])))
        if not self.joint_step > 0:
            raise ValueError("joint_step must be positive")

    def space(self) -> SpaceTopology:
        return torus(6)

    def reach(self) -> float:
        return sum(self.link_lengths)


@njit(cache=True)
def _joints(angles, base, links, out):
    x, y, phi = base[0], base[1], 0.0
    out[0, 0] = x
    out[0, 1] = y
    for i in range(links.shape[0]):
        phi += angles[i]
        x += links[i] * math.cos(phi)
        y += links[i] * math.sin(phi)
        out[i + 1, 0] = x
        out[i + 1, 1] = y


def forward_kinematics(angles: Sequence[float], chain: ChainModel) -> np.ndarray:
    """Joint positions, base first and end effector last: shape (7, 2)."""
    out = np.empty((7, 2))
    _joints(np.asarray(angles, dtype=float), np.asarray(chain.base), np.asarray(chain.link_lengths), out)
    return out


def chain_points(angles: Sequence[float], chain: ChainModel, spacing: float) -> np.ndarray:
    """Points along every link at most ``spacing`` apart (ends included)."""
    joints = forward_kinematics(angles, chain)
    pts = []
    for p, q, length in zip(joints[:-1], joints[1:], chain.link_lengths):
        m = max(1, int(math.ceil(length / spacing)))
        f = np.arange(m + 1)[:, None] / m
        pts.append(p + f * (q - p))
    return np.concatenate(pts)


# -- numba collision kernels ------------------------------------------------------

@njit(cache=True)
def _point_free(x, y, passable, cs):
    h, w = passable.shape
    if not (0.0 <= x <= w * cs and 0.0 <= y <= h * cs):
        return False
    col = min(int(x / cs), w - 1)
    row = min(int(y / cs), h - 1)
    return passable[row, col]


@njit(cache=True)
def _chain_free(angles, base, links, passable, cs, joints):
    _joints(angles, base, links, joints)
    spacing = 0.5 * cs
    for i in range(links.shape[0]):
        m = max(1, int(math.ceil(links[i] / spacing)))
        x0, y0 = joints[i, 0], joints[i, 1]
        dx, dy = joints[i + 1, 0] - x0, joints[i + 1, 1] - y0
        for j in range(m + 1):
            f = j / m
            if not _point_free(x0 + f * dx, y0 + f * dy, passable, cs):
                return False
    return True


@njit(cache=True)
def _subdivisions(length, step):
    # power of two, so halving the step checks a superset of the states
    m = 1
    while m < length / step - 1e-12:
        m *= 2
    return m


@njit(cache=True)
def _rs_path_free(a, b, rho, step, passable, cs, lengths):
    if not (_point_free(a[0], a[1], passable, cs) and _point_free(b[0], b[1], passable, cs)):
        return False
    lx, ly, lphi = rs.to_local(a[0], a[1], a[2], b[0], b[1], b[2], rho)
    kind, total = rs.solve_local(lx, ly, lphi, lengths)
    length = total * rho
    if length == 0.0:
        return True
    m = _subdivisions(length, step)
    for i in range(1, m):
        f = i / m
        x, y, _ = rs.state_along(a[0], a[1], a[2], rho, kind, lengths, f * length)
        if not _point_free(x, y, passable, cs):
            return False
    return True


@njit(cache=True)
def _wrapped_delta(a, b, periods, delta):
    for k in range(a.shape[0]):
        d = b[k] - a[k]
        p = periods[k]
        if p > 0.0:
            d = np.fmod(d, p)
            if d > 0.5 * p:
                d -= p
            elif d < -0.5 * p:
                d += p
        delta[k] = d


@njit(cache=True)
def _euclid_path_free(a, b, weights, periods, step, passable, cs, is_chain, base, links, joints):
    delta = np.empty(a.shape[0])
    _wrapped_delta(a, b, periods, delta)
    acc = 0.0
    for k in range(a.shape[0]):
        acc += (weights[k] * delta[k]) ** 2
    length = math.sqrt(acc)
    m = _subdivisions(length, step) if length > 0.0 else 0
    q = np.empty(a.shape[0])
    for i in range(m + 1):
        if i == m:
            q[:] = b
        elif i == 0:
            q[:] = a
        else:
            f = i / m
            for k in range(a.shape[0]):
                q[k] = a[k] + f * delta[k]
        if is_chain:
            if not _chain_free(q, base, links, passable, cs, joints):
                return False
        elif not _point_free(q[0], q[1], passable, cs):
            return False
    return True


class CollisionChecker:
    """State and path validity for one map, steer function and robot.

    Paths are checked at the states of :func:`dispertio.steer.steer_path`
    (spacing ``step``); the pair is put in canonical order first so the
    verdict is symmetric in its endpoints.
    """

    def __init__(self, m: OccupancyMap, steer: SteerKind, t: SpaceTopology | None = None,
                 chain: ChainModel | None = None, step: float | None = None):
        self.map = m
        self.steer = steer
        self.chain = chain
        if chain is not None and not isinstance(steer, Euclidean):
            raise ValueError("the kinematic chain moves in joint space with a Euclidean steer")
        self.topology = t if t is not None else (chain.space() if chain else map_space(m, steer))
        if step is None:
            step = chain.joint_step if chain is not None else 0.5 * m.cell_size
        if not step > 0:
            raise ValueError("step must be positive")
        self.step = float(step)
        self._params = metric_params(steer, self.topology)
        self._base = np.asarray(chain.base if chain else (0.0, 0.0), dtype=float)
        self._links = np.asarray(chain.link_lengths if chain else (), dtype=float)
        self._joints = np.empty((len(self._links) + 1, 2))
        self._buf = np.empty(5)
        self.collision_checks = 0

    def _check_inside(self, s):
        if self.chain is not None:
            x, y = self.chain.base
        else:
            x, y = s[0], s[1]
        w, h = self.map.extent
        if not (0.0 <= x <= w and 0.0 <= y <= h):
            raise ValueError(f"position ({x}, {y}) outside the {w} x {h} map")

    def state_free(self, s: Sequence[float]) -> bool:
        s = np.asarray(normalize(s, self.topology))
        self._check_inside(s)
        if self.chain is not None:
            return bool(_chain_free(s, self._base, self._links, self.map.passable,
                                    self.map.cell_size, self._joints))
        return bool(_point_free(s[0], s[1], self.map.passable, self.map.cell_size))

    def path_free(self, a: Sequence[float], b: Sequence[float]) -> bool:
        a = normalize(a, self.topology)
        b = normalize(b, self.topology)
        if b < a:
            a, b = b, a
        self.collision_checks += 1
        a = np.asarray(a)
        b = np.asarray(b)
        cs = self.map.cell_size
        if isinstance(self.steer, ReedsShepp):
            return bool(_rs_path_free(a, b, self.steer.rho, self.step, self.map.passable, cs, self._buf))
        p = self._params
        return bool(_euclid_path_free(a, b, p.weights, p.periods, self.step, self.map.passable, cs,
                                      self.chain is not None, self._base, self._links, self._joints))

    def path_states(self, a: Sequence[float], b: Sequence[float]) -> np.ndarray:
        """States :meth:`path_free` inspects, in canonical order."""
        a = normalize(a, self.topology)
        b = normalize(b, self.topology)
        if b < a:
            a, b = b, a
        return steer_path(a, b, self.steer, self.topology, self.step).states


def state_free(s: Sequence[float], m: OccupancyMap, steer: SteerKind,
               chain: ChainModel | None = None) -> bool:
    return CollisionChecker(m, steer, chain=chain).state_free(s)


def path_free(a: Sequence[float], b: Sequence[float], m: OccupancyMap, steer: SteerKind,
              step: float | None = None, chain: ChainModel | None = None,
              t: SpaceTopology | None = None) -> bool:
    return CollisionChecker(m, steer, t, chain, step).path_free(a, b)
