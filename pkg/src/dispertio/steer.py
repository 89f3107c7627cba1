"""Optimal symmetric steer functions: distances and interpolated paths.

Two systems are supported, both in closed form:

* :class:`Euclidean` -- weighted 2-norm, respecting identified dimensions
  (used for point robots and the planar kinematic chain in joint space);
* :class:`ReedsShepp` -- forward/backward car with minimum turning radius
  ``rho`` on ``(x, y, theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from numba import njit

from . import reeds_shepp as rs
from .space import SpaceTopology, normalize

EUCLIDEAN, REEDS_SHEPP = 0, 1


@dataclass(frozen=True)
class Euclidean:
    """Weighted Euclidean metric; ``weights=None`` defers to the topology."""

    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.weights is not None:
            w = tuple(float(v) for v in self.weights)
            if any(v <= 0 for v in w):
                raise ValueError("Euclidean weights must be positive")
            object.__setattr__(self, "weights", w)

    def __str__(self):
        if self.weights is None:
            return "euclidean"
        return "euclidean:" + ",".join(format(w, ".17g") for w in self.weights)


@dataclass(frozen=True)
class ReedsShepp:
    """Reeds-Shepp car; ``rho`` is the minimum turning radius in meters."""

    rho: float = 1.0

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("turning radius must be positive")
        object.__setattr__(self, "rho", float(self.rho))

    def __str__(self):
        return f"reeds-shepp:{self.rho:.17g}"


SteerKind = Euclidean | ReedsShepp


def parse_steer(text: str) -> SteerKind:
    """Inverse of ``str(steer)``; also accepts the short forms ``rs:1``."""
    name, _, arg = text.strip().partition(":")
    name = name.lower()
    if name in ("euclidean", "euclid", "l2"):
        return Euclidean(tuple(float(v) for v in arg.split(",")) if arg else None)
    if name in ("reeds-shepp", "reedsshepp", "rs"):
        return ReedsShepp(float(arg) if arg else 1.0)
    raise ValueError(f"unknown steer kind {text!r}")


class MetricParams(NamedTuple):
    """Flat, numba-friendly description of a steer metric on a topology."""

    kind: int
    rho: float
    weights: np.ndarray
    periods: np.ndarray


def metric_params(steer: SteerKind, t: SpaceTopology) -> MetricParams:
    if isinstance(steer, ReedsShepp):
        if t.dims != 3:
            raise ValueError("Reeds-Shepp needs a 3D (x, y, theta) space")
        return MetricParams(REEDS_SHEPP, steer.rho, np.ones(3), t.periods)
    weights = steer.weights if steer.weights is not None else t.weights
    if len(weights) != t.dims:
        raise ValueError("weight count does not match the space dimension")
    return MetricParams(EUCLIDEAN, 1.0, np.asarray(weights, dtype=float), t.periods)


@njit(cache=True)
def wrapped_diff(d, period):
    if period > 0.0:
        d = np.fmod(d, period)
        half = 0.5 * period
        if d > half:
            d -= period
        elif d < -half:
            d += period
    return d


@njit(cache=True)
def metric(kind, rho, weights, periods, a, b):
    """Steer distance from ``a`` to ``b``; the kernel every grid loop calls."""
    if kind == REEDS_SHEPP:
        return rs.distance(a[0], a[1], a[2], b[0], b[1], b[2], rho)
    acc = 0.0
    for i in range(a.shape[0]):
        d = weights[i] * wrapped_diff(b[i] - a[i], periods[i])
        acc += d * d
    return math.sqrt(acc)


@njit(cache=True)
def metric_many(kind, rho, weights, periods, a, targets, out):
    for i in range(targets.shape[0]):
        out[i] = metric(kind, rho, weights, periods, a, targets[i])


@njit(cache=True)
def metric_matrix(kind, rho, weights, periods, states, out):
    """Full pairwise table ``out[i, j] = dist(states[i], states[j])``."""
    n = states.shape[0]
    for i in range(n):
        for j in range(n):
            out[i, j] = metric(kind, rho, weights, periods, states[i], states[j])


@njit(cache=True)
def position_lower_bound(kind, rho, weights, periods, a, b):
    """Cheap lower bound of :func:`metric` (exact for Euclidean).

    For Reeds-Shepp both the displacement and the heading change (turned at
    curvature at most 1/rho) bound the arc length from below.
    """
    if kind == REEDS_SHEPP:
        dx = b[0] - a[0]
        dy = b[1] - a[1]
        turn = rho * abs(wrapped_diff(b[2] - a[2], 2.0 * math.pi))
        return max(math.sqrt(dx * dx + dy * dy), turn)
    acc = 0.0
    for i in range(a.shape[0]):
        d = weights[i] * wrapped_diff(b[i] - a[i], periods[i])
        acc += d * d
    return math.sqrt(acc)


def dist(a: Sequence[float], b: Sequence[float], steer: SteerKind, t: SpaceTopology) -> float:
    """Length of the optimal connection from ``a`` to ``b``."""
    p = metric_params(steer, t)
    return float(metric(p.kind, p.rho, p.weights, p.periods,
                        np.asarray(a, dtype=float), np.asarray(b, dtype=float)))


def dist_many(a: Sequence[float], targets: np.ndarray, steer: SteerKind,
              t: SpaceTopology) -> np.ndarray:
    p = metric_params(steer, t)
    targets = np.ascontiguousarray(targets, dtype=float)
    out = np.empty(len(targets))
    metric_many(p.kind, p.rho, p.weights, p.periods, np.asarray(a, dtype=float), targets, out)
    return out


def distance_matrix(states: np.ndarray, steer: SteerKind, t: SpaceTopology) -> np.ndarray:
    p = metric_params(steer, t)
    states = np.ascontiguousarray(states, dtype=float)
    out = np.empty((len(states), len(states)))
    metric_matrix(p.kind, p.rho, p.weights, p.periods, states, out)
    return out


# -- Reeds-Shepp words ---------------------------------------------------------

@dataclass(frozen=True)
class RSWord:
    """Solved Reeds-Shepp connection.

    ``segments`` holds signed lengths in meters (negative = reverse gear);
    ``word`` is the letter form with zero-length segments removed.
    """

    word: str
    letters: tuple[str, ...]
    segments: tuple[float, ...]
    length: float
    kind: int
    unit_lengths: tuple[float, ...]


def reeds_shepp_solve(a: Sequence[float], b: Sequence[float], rho: float) -> RSWord:
    if not rho > 0:
        raise ValueError("turning radius must be positive")
    lx, ly, lphi = rs.to_local(float(a[0]), float(a[1]), float(a[2]),
                               float(b[0]), float(b[1]), float(b[2]), float(rho))
    buf = np.empty(5)
    kind, total = rs.solve_local(lx, ly, lphi, buf)
    letters, segments = [], []
    for seg, v in zip(rs.WORD_TYPES[kind], buf):
        if seg == rs.NOP or abs(v) <= 1e-12:
            continue
        letters.append(rs._LETTERS[int(seg)])
        segments.append(float(v) * rho)
    return RSWord(rs.word_string(kind, buf), tuple(letters), tuple(segments),
                  float(total) * rho, int(kind), tuple(float(v) for v in buf))


# -- paths ----------------------------------------------------------------------

class PathSample(NamedTuple):
    states: np.ndarray  # (m, D), first row a, last row b
    length: float


def _subdivisions(length: float, step: float) -> int:
    """Smallest power of two with ``length / m <= step``; halving the step
    then keeps every earlier state."""
    m = 1
    while m < length / step - 1e-12:
        m *= 2
    return m


def steer_path(a: Sequence[float], b: Sequence[float], steer: SteerKind,
               t: SpaceTopology, step: float) -> PathSample:
    """States along the optimal connection, uniformly spaced in arc length."""
    if not step > 0:
        raise ValueError("step must be positive")
    a = np.asarray(normalize(a, t))
    b = np.asarray(normalize(b, t))
    length = dist(a, b, steer, t)
    if length == 0.0:
        return PathSample(a[None, :].copy(), 0.0)
    m = _subdivisions(length, step)
    fractions = np.arange(m + 1) / m
    if isinstance(steer, ReedsShepp):
        word = reeds_shepp_solve(a, b, steer.rho)
        lengths = np.array(word.unit_lengths)
        pts = np.array([rs.state_along(a[0], a[1], a[2], steer.rho, word.kind, lengths, f * length)
                        for f in fractions])
    else:
        delta = np.array([wrapped_diff(bi - ai, p) for ai, bi, p in zip(a, b, t.periods)])
        pts = a[None, :] + fractions[:, None] * delta[None, :]
    pts[0] = a
    pts[-1] = b
    pts = np.array([normalize(p, t) for p in pts])
    return PathSample(pts, float(length))
