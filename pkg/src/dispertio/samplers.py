"""Baseline sample generators: Halton, seeded i.i.d. uniform and Sukharev grids."""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from .dispersion import SampleSet, dispertio
from .space import SpaceTopology, normalize_array
from .steer import Euclidean, SteerKind

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


def radical_inverse(index: int, base: int) -> float:
    """Digits of ``index`` in ``base`` mirrored about the radix point."""
    inv, f = 0.0, 1.0 / base
    scale = f
    while index > 0:
        index, digit = divmod(index, base)
        inv += digit * scale
        scale *= f
    return inv


def halton_points(n: int, dims: int, start: int = 1) -> np.ndarray:
    """Unit-cube Halton points for indices ``start .. start + n - 1``."""
    if dims > len(PRIMES):
        raise ValueError(f"at most {len(PRIMES)} dimensions supported")
    return np.array([[radical_inverse(i, PRIMES[d]) for d in range(dims)]
                     for i in range(start, start + n)], dtype=float).reshape(n, dims)


def _scale(unit: np.ndarray, t: SpaceTopology) -> np.ndarray:
    lower = np.asarray(t.lower)
    return normalize_array(lower + unit * t.widths, t)


def halton(n: int, t: SpaceTopology, steer: SteerKind | None = None) -> SampleSet:
    if n < 0:
        raise ValueError("n must be non-negative")
    return SampleSet(t, steer or Euclidean(), _scale(halton_points(n, t.dims), t), "halton")


def iid_uniform(n: int, t: SpaceTopology, seed: int, steer: SteerKind | None = None) -> SampleSet:
    """Uniform samples from numpy's PCG64 generator seeded with ``seed``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = np.random.Generator(np.random.PCG64(seed))
    return SampleSet(t, steer or Euclidean(), _scale(rng.random((n, t.dims)), t), f"iid({seed})")


def sukharev(cells_per_dim: int, t: SpaceTopology, steer: SteerKind | None = None) -> SampleSet:
    """Centers of the ``cells_per_dim ** D`` uniform partition, row-major."""
    if cells_per_dim < 1:
        raise ValueError("cells_per_dim must be at least 1")
    ticks = (np.arange(cells_per_dim) + 0.5) / cells_per_dim
    unit = np.array(list(itertools.product(ticks, repeat=t.dims)), dtype=float)
    return SampleSet(t, steer or Euclidean(), _scale(unit, t), "sukharev")


def default_resolution(t: SpaceTopology, steer: SteerKind) -> tuple[int, ...]:
    """Grid sizes that keep the dispersion tensor at desk scale."""
    if t.dims == 2:
        return (256, 256)
    if t.dims == 3 and not isinstance(steer, Euclidean):
        return (64, 64, 32)
    if t.dims == 3:
        return (64, 64, 64)
    return (8,) * t.dims


def parse_sampler(name: str) -> tuple[str, int | None]:
    """``dispertio``, ``halton``, ``sukharev`` or ``iid(seed)`` / ``iid:seed``."""
    text = name.strip().lower()
    for sep in ("(", ":"):
        if text.startswith("iid" + sep):
            seed = text[4:].rstrip(")")
            return "iid", int(seed)
    if text in ("dispertio", "halton", "sukharev"):
        return text, None
    raise ValueError(f"unknown sampler {name!r}")


def make_sample_set(name: str, n: int, t: SpaceTopology, steer: SteerKind,
                    resolution: Sequence[int] | None = None, border_mode: str | None = None) -> SampleSet:
    """Sample set by sampler name. ``sukharev`` uses ``round(n ** (1/D))``
    cells per dimension, so it may return a different count."""
    kind, seed = parse_sampler(name)
    if kind == "dispertio":
        res = tuple(resolution) if resolution else default_resolution(t, steer)
        return dispertio(n, t, steer, res, border_mode)
    if kind == "halton":
        return halton(n, t, steer)
    if kind == "iid":
        return iid_uniform(n, t, seed, steer)
    return sukharev(max(1, int(round(n ** (1.0 / t.dims)))), t, steer)
