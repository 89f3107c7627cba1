"""Seeded random block maps with a connected free space, and query generation."""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from ..maps import OccupancyMap

MAX_ATTEMPTS = 200


def _connected(passable: np.ndarray) -> bool:
    labels, count = ndimage.label(passable)  # 4-connectivity
    return count == 1


def _block_map(rng: np.random.Generator, size: int, density: float) -> np.ndarray:
    passable = np.ones((size, size), dtype=bool)
    if density <= 0.0:
        return passable
    target = density * size * size
    longest = max(1, size // 8)
    while (~passable).sum() < target:
        h, w = rng.integers(1, longest + 1, size=2)
        r = rng.integers(0, size - h + 1)
        c = rng.integers(0, size - w + 1)
        passable[r:r + h, c:c + w] = False
    return passable


def random_maps(seed: int, count: int, size: int, density: float,
                cell_size: float = 1.0) -> list[OccupancyMap]:
    """``count`` square ``size`` x ``size`` maps of rectangular blocks.

    Map ``i`` draws from its own stream spawned from ``seed``, so a map does
    not depend on how many maps are requested. Candidates whose free cells
    are not one 4-connected component are discarded and redrawn.
    """
    if not 0.0 <= density <= 0.5:
        raise ValueError("density must lie in [0, 0.5]")
    if size < 2 or count < 0:
        raise ValueError("size must be at least 2 and count non-negative")
    maps = []
    for child in np.random.SeedSequence(seed).spawn(count):
        rng = np.random.Generator(np.random.PCG64(child))
        for _ in range(MAX_ATTEMPTS):
            passable = _block_map(rng, size, density)
            if _connected(passable):
                break
        else:
            raise ValueError(f"no connected map found at density {density} after {MAX_ATTEMPTS} attempts")
        maps.append(OccupancyMap(passable, cell_size))
    return maps


def random_queries(m: OccupancyMap, count: int, seed: int, dims: int = 2,
                   min_separation: float | None = None) -> list[tuple[tuple, tuple]]:
    """Start/goal pairs uniform over free space, positions at least
    ``min_separation`` apart (default a quarter of the map width).

    A third coordinate, when requested, is a heading uniform on [-pi, pi).
    """
    if min_separation is None:
        min_separation = 0.25 * m.extent[0]
    rng = np.random.Generator(np.random.PCG64(seed))
    w, h = m.extent

    def draw():
        while True:
            x, y = rng.random() * w, rng.random() * h
            col = min(int(x / m.cell_size), m.width - 1)
            row = min(int(y / m.cell_size), m.height - 1)
            if m.passable[row, col]:
                if dims == 3:
                    return (float(x), float(y), float(rng.uniform(-math.pi, math.pi)))
                return (float(x), float(y))

    queries = []
    for _ in range(count):
        for _ in range(10000):
            a, b = draw(), draw()
            if math.hypot(a[0] - b[0], a[1] - b[1]) >= min_separation:
                break
        else:
            raise ValueError("could not place a query with the requested separation")
        queries.append((a, b))
    return queries
