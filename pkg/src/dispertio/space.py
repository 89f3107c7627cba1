"""Box configuration spaces with optional per-dimension identification."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

State = tuple  # plain coordinate tuple, see normalize()


@dataclass(frozen=True)
class SpaceTopology:
    """Axis-aligned box ``[lower, upper]`` where identified dimensions wrap.

    ``weights`` are the per-dimension metric weights used by the Euclidean
    steer function when it does not carry its own.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    identified: tuple[bool, ...] = None
    weights: tuple[float, ...] = None

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        dims = len(lower)
        if dims == 0 or len(upper) != dims:
            raise ValueError("lower and upper must be non-empty and of equal length")
        identified = (False,) * dims if self.identified is None else tuple(bool(v) for v in self.identified)
        weights = (1.0,) * dims if self.weights is None else tuple(float(v) for v in self.weights)
        if len(identified) != dims or len(weights) != dims:
            raise ValueError("identified and weights must match the dimension")
        for lo, hi in zip(lower, upper):
            if not lo < hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "identified", identified)
        object.__setattr__(self, "weights", weights)

    @property
    def dims(self) -> int:
        return len(self.lower)

    @property
    def widths(self) -> np.ndarray:
        return np.subtract(self.upper, self.lower)

    @property
    def periods(self) -> np.ndarray:
        """Wrap period per dimension, 0 for non-identified dimensions."""
        return np.array([hi - lo if ident else 0.0
                         for lo, hi, ident in zip(self.lower, self.upper, self.identified)])

    def volume(self) -> float:
        return float(np.prod(self.widths))


def box(lower: Sequence[float], upper: Sequence[float]) -> SpaceTopology:
    return SpaceTopology(tuple(lower), tuple(upper))


def unit_square() -> SpaceTopology:
    return SpaceTopology((0.0, 0.0), (1.0, 1.0))


def reeds_shepp_space(width: float, height: float | None = None) -> SpaceTopology:
    """Planar car space ``[0, w] x [0, h] x [-pi, pi)`` with identified heading."""
    height = width if height is None else height
    return SpaceTopology((0.0, 0.0, -math.pi), (float(width), float(height), math.pi),
                         identified=(False, False, True))


def torus(dims: int, lo: float = -math.pi, hi: float = math.pi) -> SpaceTopology:
    return SpaceTopology((lo,) * dims, (hi,) * dims, identified=(True,) * dims)


def _wrap(value: float, lo: float, hi: float) -> float:
    if lo <= value < hi:
        return value
    wrapped = lo + math.fmod(value - lo, hi - lo)
    if wrapped < lo:
        wrapped += hi - lo
    if wrapped >= hi:
        # fmod can round up to exactly the period
        wrapped = lo
    return wrapped


def normalize(s: Sequence[float], t: SpaceTopology) -> State:
    """Wrap identified coordinates into ``[lower, upper)``; others pass through."""
    if len(s) != t.dims:
        raise ValueError(f"state has {len(s)} coordinates, space has {t.dims}")
    return tuple(_wrap(float(c), lo, hi) if ident else float(c)
                 for c, lo, hi, ident in zip(s, t.lower, t.upper, t.identified))


def normalize_array(states: np.ndarray, t: SpaceTopology) -> np.ndarray:
    """Vectorised :func:`normalize` over rows of ``states``."""
    states = np.array(states, dtype=float, copy=True)
    if states.ndim != 2 or states.shape[1] != t.dims:
        raise ValueError(f"expected (n, {t.dims}) array")
    for i, ident in enumerate(t.identified):
        if ident:
            lo, hi = t.lower[i], t.upper[i]
            col = states[:, i]
            out = (col < lo) | (col >= hi)
            if out.any():
                col[out] = [_wrap(v, lo, hi) for v in col[out]]
    return states


def contains(s: Sequence[float], t: SpaceTopology) -> bool:
    if len(s) != t.dims:
        raise ValueError(f"state has {len(s)} coordinates, space has {t.dims}")
    return all(ident or lo <= c <= hi
               for c, lo, hi, ident in zip(s, t.lower, t.upper, t.identified))


# -- text descriptors -------------------------------------------------------

def _fmt(v: float) -> str:
    return format(v, ".17g")


def _num(token: str) -> float:
    token = token.strip().lower()
    sign = -1.0 if token.startswith("-") else 1.0
    body = token.lstrip("+-")
    if body == "pi":
        return sign * math.pi
    if body.endswith("pi"):
        return sign * float(body[:-2]) * math.pi
    return float(token)


def format_space(t: SpaceTopology) -> str:
    """Compact descriptor, e.g. ``0:10,0:10,-pi:pi~`` (``~`` marks identified).

    Weights other than 1 are appended as ``*w``.
    """
    parts = []
    for lo, hi, ident, w in zip(t.lower, t.upper, t.identified, t.weights):
        part = f"{_fmt(lo)}:{_fmt(hi)}"
        if ident:
            part += "~"
        if w != 1.0:
            part += f"*{_fmt(w)}"
        parts.append(part)
    return ",".join(parts)


def parse_space(text: str) -> SpaceTopology:
    lower, upper, identified, weights = [], [], [], []
    for part in text.strip().split(","):
        part = part.strip()
        weight = 1.0
        if "*" in part:
            part, w = part.rsplit("*", 1)
            weight = float(w)
        ident = part.endswith("~")
        part = part.rstrip("~")
        try:
            lo, hi = part.split(":")
        except ValueError:
            raise ValueError(f"bad dimension descriptor {part!r}") from None
        lower.append(_num(lo))
        upper.append(_num(hi))
        identified.append(ident)
        weights.append(weight)
    return SpaceTopology(tuple(lower), tuple(upper), tuple(identified), tuple(weights))
