"""A small end-to-end benchmark through the same code path as the CLI.

Writes a config file, runs it and prints the success rates and the
pairwise score matrix for the largest sample count.

    python demos/small_benchmark.py [output dir]
"""

import sys
from pathlib import Path

from dispertio.bench import load_config, run_benchmark

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-out") / "bench"
out.mkdir(parents=True, exist_ok=True)
config = out / "bench.cfg"
config.write_text(f"""\
# Reeds-Shepp car, turning radius 5, on 4 random block maps
steer = reeds-shepp:5
samplers = dispertio, halton, iid(1), iid(2)
n_schedule = 100, 300
map_seed = 7
map_count = 4
map_size = 24
eta = 0.2
query_count = 6
grid_resolution = 32, 32, 16
output_dir = {out}
""")

report = run_benchmark(load_config(config))
print(open(out / "summary.csv").read())
n = max(report.scores)
sm = report.scores[n]
names = list(sm.names)
print(f"scores at n={n} (row beats column when positive)")
print(" " * 12 + "".join(f"{b:>11}" for b in names))
for a in names:
    print(f"{a:>12}" + "".join(f"{sm.score(a, b):>+11.3f}" if a != b else f"{'':>11}" for b in names))
