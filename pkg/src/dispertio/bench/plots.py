"""Dispersion trends and coverage images."""

from __future__ import annotations

import csv
from typing import Mapping, Sequence

import numpy as np

from ..dispersion import SampleSet, measure_dispersion, nearest_sample_distances
from ..grid import DispersionGrid
from ..steer import SteerKind


def geometric_schedule(n_max: int, start: int = 1, ratio: float = 2.0) -> list[int]:
    """``start, start*ratio, ...`` (rounded, distinct) capped by and ending at ``n_max``."""
    out, v = [], float(start)
    while v < n_max:
        if not out or int(round(v)) > out[-1]:
            out.append(int(round(v)))
        v *= ratio
    out.append(int(n_max))
    return out


def dispersion_trend(samplers: Mapping[str, SampleSet], n_max: int, g: DispersionGrid,
                     steer: SteerKind, schedule: Sequence[int] | None = None) -> list[tuple[str, int, float]]:
    """Rows ``(sampler, n, measured dispersion)`` over a geometric schedule."""
    schedule = list(schedule) if schedule is not None else geometric_schedule(n_max)
    rows = []
    for name, s in samplers.items():
        if len(s) < max(schedule):
            raise ValueError(f"sample set {name!r} has fewer than {max(schedule)} samples")
        values = measure_dispersion(s, g, steer, schedule)
        rows += [(name, n, v) for n, v in zip(schedule, values)]
    return rows


def write_trend_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sampler", "n", "dispersion"])
        for name, n, v in rows:
            w.writerow([name, n, repr(float(v))])


def trend_slope(rows, sampler: str) -> float:
    """Least-squares slope of log dispersion against log n."""
    pts = np.array([(n, v) for name, n, v in rows if name == sampler and n > 0], dtype=float)
    return float(np.polyfit(np.log(pts[:, 0]), np.log(pts[:, 1]), 1)[0])


def plot_trend(rows, path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with plt.rc_context({"svg.hashsalt": "dispertio"}):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for name in dict.fromkeys(r[0] for r in rows):
            pts = [(n, v) for nm, n, v in rows if nm == name]
            ax.loglog(*zip(*pts), marker="o", ms=3, label=name)
        ax.set_xlabel("samples n")
        ax.set_ylabel("measured dispersion")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def _slice(values: np.ndarray, g: DispersionGrid, plane: tuple[int, int], fixed: Mapping[int, float]):
    index = []
    for k in range(g.dims):
        if k in plane:
            index.append(slice(None))
        else:
            if k not in fixed:
                raise ValueError(f"dimension {k} needs a slice value")
            index.append(g.cell_index_1d(k, fixed[k]))
    return values[tuple(index)]


def coverage_values(s: SampleSet, g: DispersionGrid, steer: SteerKind, border: bool = False) -> np.ndarray:
    """Per-cell distance to the nearest sample; with ``border`` the distance
    to the border of the space also counts (the dispersion tensor)."""
    values = nearest_sample_distances(s, g, steer).copy()
    if border:
        np.minimum(values, g.border, out=values)
    return values


def uncovered_fraction(values: np.ndarray, r: float) -> float:
    return float(np.mean(values > r))


def coverage_plot(s: SampleSet, g: DispersionGrid, steer: SteerKind, path=None, r: float | None = None,
                  fixed: Mapping[int, float] | None = None, plane: tuple[int, int] = (0, 1),
                  vmax: float | None = None, border: bool = False) -> float:
    """Render the nearest-sample distance field with sample markers as SVG.

    Returns the share of cells (over the whole grid) farther than ``r`` from
    every sample; ``r`` defaults to the measured dispersion of ``s``. With
    ``border`` the field is the dispersion tensor instead. Spaces
    with more than two dimensions need ``fixed`` values for the dimensions
    outside ``plane``; markers show the samples inside the sliced cell layer.
    """
    fixed = dict(fixed or {})
    if g.dims > 2 and set(fixed) | set(plane) != set(range(g.dims)):
        raise ValueError("spaces with more than two dimensions need a slice for every other dimension")
    values = coverage_values(s, g, steer, border)
    if r is None:
        r = measure_dispersion(s, g, steer)
    frac = uncovered_fraction(values, r)
    if path is None:
        return frac
    image = _slice(values, g, plane, fixed)
    if plane[0] < plane[1]:
        image = image.T  # rows follow the second plane axis
    finite = image[np.isfinite(image)]
    top = vmax if vmax is not None else (float(finite.max()) if finite.size else 1.0)
    shown = np.where(np.isfinite(image), image, top)
    pts = s.samples
    keep = np.ones(len(pts), dtype=bool)
    for k, v in fixed.items():
        keep &= np.array([g.cell_index_1d(k, x) for x in pts[:, k]]) == g.cell_index_1d(k, v)
    pts = pts[keep]

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    t = g.topology
    extent = (t.lower[plane[0]], t.upper[plane[0]], t.lower[plane[1]], t.upper[plane[1]])
    with plt.rc_context({"svg.hashsalt": "dispertio"}):
        fig, ax = plt.subplots(figsize=(4.5, 4))
        im = ax.imshow(shown, origin="lower", extent=extent, cmap="magma", vmin=0.0, vmax=top,
                       interpolation="nearest", aspect="auto")
        if len(pts):
            ax.scatter(pts[:, plane[0]], pts[:, plane[1]], s=6, c="cyan", edgecolors="none")
        ax.set_title(f"{s.generator}, n={len(s)}, uncovered {frac:.3f} at r={r:.4g}", fontsize=8)
        fig.colorbar(im, ax=ax, label="distance to nearest sample" + (" or border" if border else ""))
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return frac
