"""Dispersion under the Reeds-Shepp metric as the sample count grows.

The car configuration space is [0, 10]^2 x S^1 with turning radius 1. Each
set is measured on the same border-initialised grid (coarser than the
default so the demo finishes in well under a minute) and the log-log trend is
written as CSV and SVG.

    python demos/reeds_shepp_trend.py [output dir]
"""

import sys
from pathlib import Path

from dispertio import ReedsShepp, bordered_grid, generate, halton, iid_uniform, reeds_shepp_space
from dispertio.bench import dispersion_trend, geometric_schedule, plot_trend, trend_slope, write_trend_csv

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-out")
out.mkdir(parents=True, exist_ok=True)

t, steer, res = reeds_shepp_space(10), ReedsShepp(1.0), (32, 32, 16)
n_max = 400
g = bordered_grid(t, res, steer)
sets = {
    "dispertio": generate(n_max, g.copy(), steer),  # the cached grid stays clean
    "halton": halton(n_max, t, steer),
    "iid(1)": iid_uniform(n_max, t, 1, steer),
}
rows = dispersion_trend(sets, n_max, g, steer, geometric_schedule(n_max, start=8))
for name, n, v in rows:
    print(f"{name:>10} n={n:<4d} dispersion {v:.3f}")
for name in sets:
    print(f"{name}: log-log slope {trend_slope(rows, name):+.3f}")

write_trend_csv(rows, out / "rs_trend.csv")
plot_trend(rows, out / "rs_trend.svg")
print(f"wrote {out}/rs_trend.csv and {out}/rs_trend.svg")
