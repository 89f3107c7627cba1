"""Greedy dispersion samples on the unit square next to Halton and i.i.d. points.

Prints the measured dispersion of each set for a few prefix sizes and writes
one coverage image per set (distance to the nearest sample, colour capped at
Halton's dispersion so the images are comparable).

    python demos/coverage_2d.py [output dir]
"""

import sys
from pathlib import Path

from dispertio import Euclidean, bordered_grid, dispertio, halton, iid_uniform, measure_dispersion, unit_square
from dispertio.bench import coverage_plot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-out")
out.mkdir(parents=True, exist_ok=True)

t, steer, res = unit_square(), Euclidean(), (256, 256)
sets = {
    "dispertio": dispertio(100, t, steer, res),
    "halton": halton(100, t),
    "iid": iid_uniform(100, t, seed=1),
}
g = bordered_grid(t, res, steer)

print(f"{'n':>5}" + "".join(f"{name:>12}" for name in sets))
table = {name: measure_dispersion(s, g, steer, prefixes=(10, 25, 50, 100)) for name, s in sets.items()}
for row, n in enumerate((10, 25, 50, 100)):
    print(f"{n:>5}" + "".join(f"{table[name][row]:>12.4f}" for name in sets))

r = table["halton"][-1]
for name, s in sets.items():
    frac = coverage_plot(s, g, steer, out / f"coverage_{name}.svg", r=r, vmax=1.5 * r)
    print(f"{name}: share of cells farther than {r:.4f} from every sample = {frac:.4f}")
# The greedy set starts in the middle and works outwards, so corners are the
# last places to be covered; with the border counted they are covered already.
frac = coverage_plot(sets["dispertio"], g, steer, r=r, border=True)
print(f"dispertio with the border counted as covered: {frac:.4f}")
print(f"images in {out}/")
