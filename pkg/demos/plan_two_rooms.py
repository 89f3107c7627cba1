"""Plan across a two-room map with PRM* on a greedy dispersion sample set.

The same map is solved for a point robot and for a car with turning radius
0.5; the roadmap sizes and path costs are printed and the point-robot path
is drawn over the map.

    python demos/plan_two_rooms.py [output dir]
"""

import sys
from pathlib import Path

import numpy as np

from dispertio import Euclidean, ReedsShepp, box, dispertio, parse_map, plan, reeds_shepp_space

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-out")
out.mkdir(parents=True, exist_ok=True)

ROWS = [
    "....................",
    "....................",
    "....................",
    ".........@@.........",
    ".........@@.........",
    ".........@@.........",
    ".........@@.........",
    ".........@@.........",
    ".........@@.........",
    "....................",
    "....................",
    ".........@@.........",
    ".........@@.........",
    ".........@@.........",
    ".........@@.........",
    ".........@@.........",
]
text = f"type octile\nheight {len(ROWS)}\nwidth {len(ROWS[0])}\nmap\n" + "\n".join(ROWS) + "\n"
m = parse_map(text)
w, h = m.extent

point = Euclidean()
s = dispertio(400, box((0, 0), (w, h)), point, (160, 128))
res = plan((2.0, 2.0), (18.0, 14.0), s, m)
print(f"point robot: success {res.success}, cost {res.cost:.3f}, "
      f"{res.stats['vertices']} graph vertices, path of {len(res.path)} states")

car = ReedsShepp(0.5)
s_car = dispertio(1500, reeds_shepp_space(w, h), car, (40, 32, 16))
res_car = plan((2.0, 2.0, 0.0), (18.0, 14.0, np.pi / 2), s_car, m)
print(f"car: success {res_car.success}, cost {res_car.cost:.3f}, path of {len(res_car.path)} states")

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

fig, ax = plt.subplots(figsize=(5, 4))
ax.imshow(~m.passable, origin="lower", extent=(0, w, 0, h), cmap="Greys", vmin=0, vmax=1.5)
ax.scatter(s.samples[:, 0], s.samples[:, 1], s=3, c="tab:blue")
if res.success:
    ax.plot(*np.array(res.path)[:, :2].T, c="tab:red", lw=2)
ax.set_title("PRM* path over 400 greedy dispersion samples", fontsize=8)
fig.tight_layout()
fig.savefig(out / "two_rooms.svg", metadata={"Date": None})
print(f"wrote {out}/two_rooms.svg")
