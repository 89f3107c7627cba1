"""Greedy dispersion-minimising sample generation and dispersion measurement.

The generator repeatedly places a sample at the cell with the largest
distance to everything placed so far (border included) and floods the new
distances through the grid. The measured dispersion of a set is the largest
cell value after inserting the set into a border-initialised grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .grid import (DispersionGrid, GridSaturated, argmax_index, border_points,
                   build_grid, init_border)
from .space import SpaceTopology, format_space, parse_space
from .steer import SteerKind, parse_steer

SET_MAGIC = "dispertio-set v1"


@dataclass
class SampleSet:
    """Ordered sample list; every prefix is itself a valid sample set.

    ``prefix_dispersion[k]`` (when recorded) is the dispersion of the first
    ``k`` samples, so it has ``len(samples) + 1`` entries.
    """

    topology: SpaceTopology
    steer: SteerKind
    samples: np.ndarray
    generator: str
    prefix_dispersion: list[float] | None = field(default=None, compare=False)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float).reshape(-1, self.topology.dims)
        self.samples = samples

    def __len__(self) -> int:
        return len(self.samples)

    def prefix(self, n: int) -> "SampleSet":
        pd = None if self.prefix_dispersion is None else self.prefix_dispersion[: n + 1]
        return SampleSet(self.topology, self.steer, self.samples[:n].copy(), self.generator, pd)


def _lazy_state(g: DispersionGrid) -> dict:
    state = g._scratch.get("lazy")
    if state is None:
        points, cells = border_points(g)
        by_cell: dict[int, list[np.ndarray]] = {}
        for p, c in zip(points, cells):
            by_cell.setdefault(int(c), []).append(p)
        state = {"open": g.boundary_mask().copy(), "points": by_cell, "processed": 0}
        g._scratch["lazy"] = state
    return state


def _insert_lazy(g: DispersionGrid, steer: SteerKind) -> np.ndarray:
    """Pick the next sample in lazy border mode and insert it.

    If the candidate would improve a boundary cell that has not seen its border
    points yet, the nearest such cell's border points are inserted (without
    becoming samples) and the argmax is retried. Each retry closes one cell,
    so the loop ends after at most one retry per boundary cell.
    """
    state = _lazy_state(g)
    closed = np.zeros(g.n_cells, dtype=np.bool_)
    while True:
        i = argmax_index(g)
        x = np.asarray(g.center(i))
        _, improved, hits, nearest = g._run_fill(x, steer, commit=False, open_boundary=state["open"])
        if not hits:
            buf = g._scratch["buffers"]
            g.values.reshape(-1)[buf["out_idx"][:improved]] = buf["out_val"][:improved]
            return x
        for p in state["points"][int(nearest)]:
            g._run_fill(p, steer, open_boundary=closed)
        state["open"][nearest] = False
        state["processed"] += 1


def generate(n: int, g: DispersionGrid, steer: SteerKind, record_prefix: bool = False) -> SampleSet:
    """Generate ``n`` samples greedily on ``g`` (mutated in place).

    ``g`` must have gone through :func:`init_border` (any mode). With
    ``record_prefix`` the grid maximum is stored after every insertion; it is
    the exact measured dispersion of each prefix except in lazy border mode,
    where the border is only partially known.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if g.border_mode is None:
        raise ValueError("grid has no border initialisation; call init_border first")
    if n >= g.n_cells:
        raise ValueError("n must be smaller than the number of grid cells")
    samples = np.empty((n, g.dims))
    prefix = [float(g.values.max())] if record_prefix else None
    for k in range(n):
        try:
            if g.lazy:
                x = _insert_lazy(g, steer)
            else:
                x = np.asarray(g.center(argmax_index(g)))
                g._run_fill(x, steer)
        except GridSaturated as exc:
            raise GridSaturated(f"grid saturated after {k} of {n} samples") from exc
        samples[k] = x
        if record_prefix:
            prefix.append(float(g.values.max()))
    return SampleSet(g.topology, steer, samples, "dispertio", prefix)


def dispertio(n: int, t: SpaceTopology, steer: SteerKind, resolution, border_mode: str | None = None,
              record_prefix: bool = False) -> SampleSet:
    """Convenience wrapper: fresh grid, border initialisation, generation."""
    g = init_border(build_grid(t, resolution), steer, border_mode)
    return generate(n, g, steer, record_prefix)


# -- measurement ------------------------------------------------------------------

_BORDER_CACHE: dict = {}


def bordered_grid(t: SpaceTopology, resolution, steer: SteerKind, mode: str | None = None) -> DispersionGrid:
    """Border-initialised grid, cached per (topology, resolution, steer, mode).

    The cached instance is shared: measuring resets its values from the border
    snapshot, so use :meth:`DispersionGrid.copy` before generating on it.
    """
    if isinstance(resolution, int):
        resolution = (resolution,) * t.dims
    key = (t, tuple(resolution), steer, mode)
    if key not in _BORDER_CACHE:
        _BORDER_CACHE[key] = init_border(build_grid(t, resolution), steer, mode)
    return _BORDER_CACHE[key]


def measure_dispersion(s: SampleSet | np.ndarray, g: DispersionGrid, steer: SteerKind,
                       prefixes: Iterable[int] | None = None):
    """Grid approximation of the border-constrained dispersion of ``s``.

    Returns the largest cell value of min(border distance, nearest sample
    distance). With ``prefixes`` a list of the values for those prefix sizes
    is returned instead (all from one pass). ``g`` keeps its border snapshot;
    its current values are restored afterwards.
    """
    if g.border_mode is None:
        raise ValueError("grid has no border initialisation")
    if g.lazy:
        raise ValueError("measuring needs a grid with a full border initialisation")
    if g.steer is not None and g.steer != steer:
        raise ValueError(f"grid border was computed for {g.steer}, not {steer}")
    samples = s.samples if isinstance(s, SampleSet) else np.asarray(s, dtype=float).reshape(-1, g.dims)
    wanted = [len(samples)] if prefixes is None else sorted(set(int(p) for p in prefixes))
    if wanted and (wanted[0] < 0 or wanted[-1] > len(samples)):
        raise ValueError("prefix size out of range")
    saved = g.values
    g.values = g.border.copy()
    out = {}
    try:
        pending = list(wanted)
        for k in range(len(samples) + 1):
            while pending and pending[0] == k:
                out[k] = float(g.values.max())
                pending.pop(0)
            if not pending:
                break
            g._run_fill(samples[k], steer)
    finally:
        g.values = saved
    if prefixes is None:
        return out[len(samples)]
    return [out[int(p)] for p in prefixes]


def nearest_sample_distances(s: SampleSet | np.ndarray, g: DispersionGrid, steer: SteerKind) -> np.ndarray:
    """Per-cell distance to the nearest sample, without any border term."""
    samples = s.samples if isinstance(s, SampleSet) else np.asarray(s, dtype=float).reshape(-1, g.dims)
    saved = g.values
    g.values = np.full(g.resolution, np.inf)
    no_boundary = np.zeros(g.n_cells, dtype=np.bool_)
    try:
        for x in samples:
            g._run_fill(x, steer, open_boundary=no_boundary)
        return g.values
    finally:
        g.values = saved


# -- file format ----------------------------------------------------------------

def format_sample_set(s: SampleSet) -> str:
    lines = [SET_MAGIC, f"space {format_space(s.topology)}", f"steer {s.steer}",
             f"generator {s.generator}", f"count {len(s)}"]
    lines += [" ".join(format(float(v), ".17g") for v in row) for row in s.samples]
    return "\n".join(lines) + "\n"


def parse_sample_set(text: str) -> SampleSet:
    lines = text.splitlines()
    if not lines or lines[0].strip() != SET_MAGIC:
        raise ValueError("not a dispertio sample-set file")
    meta = {}
    for line, key in zip(lines[1:5], ("space", "steer", "generator", "count")):
        k, _, v = line.partition(" ")
        if k != key:
            raise ValueError(f"expected header field {key!r}, got {k!r}")
        meta[k] = v.strip()
    t = parse_space(meta["space"])
    count = int(meta["count"])
    rows = [ln for ln in lines[5:] if ln.strip()]
    if len(rows) != count:
        raise ValueError(f"header announces {count} samples, found {len(rows)}")
    samples = np.array([[float(v) for v in ln.split()] for ln in rows], dtype=float).reshape(count, t.dims)
    return SampleSet(t, parse_steer(meta["steer"]), samples, meta["generator"])


def save_sample_set(s: SampleSet, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_sample_set(s))


def load_sample_set(path) -> SampleSet:
    with open(path, encoding="ascii") as fh:
        return parse_sample_set(fh.read())
