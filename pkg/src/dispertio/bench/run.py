"""Benchmark runner: sample sets x maps x sample counts x queries.

Everything written to ``queries.csv``, ``summary.csv``, ``scores.csv``, the
sample-set files and the map files is a pure function of the config. Wall
times (per query, per roadmap and per sample set, map and query ``-1`` where
they do not apply) go to ``timings.csv``, the only file that changes between
runs.
"""

from __future__ import annotations

import csv
import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..dispersion import SampleSet, save_sample_set
from ..maps import CollisionChecker, OccupancyMap, load_map, map_space, save_map
from ..prm import Planner, build_roadmap
from ..samplers import make_sample_set
from ..steer import ReedsShepp, distance_matrix, parse_steer
from .config import BenchConfig, format_config
from .mapgen import random_maps, random_queries
from .scoring import ScoreMatrix, score_pairwise


@dataclass
class BenchReport:
    config: BenchConfig
    files: dict[str, Path]
    costs: dict[str, dict[tuple[int, int, int], float]]  # sampler -> (map, query, n) -> cost
    scores: dict[int, ScoreMatrix]
    success_rate: dict[tuple[str, int], float]


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_")


def _fmt(v: float) -> str:
    return "inf" if math.isinf(v) else repr(float(v))


def bench_maps(c: BenchConfig) -> list[OccupancyMap]:
    steer = parse_steer(c.steer)
    if c.map_source == "files":
        try:
            maps = [load_map(p, c.cell_size) for p in c.map_files]
        except OSError as exc:
            raise ValueError(f"cannot read map file: {exc}") from exc
        shapes = {m.passable.shape for m in maps}
        if len(shapes) > 1:
            raise ValueError("all map files of one benchmark must have the same size")
        if isinstance(steer, ReedsShepp):
            width = steer.rho / c.eta
            maps = [OccupancyMap(m.passable, width / m.width) for m in maps]
        return maps
    cell = steer.rho / c.eta / c.map_size if isinstance(steer, ReedsShepp) else c.cell_size
    return random_maps(c.map_seed, c.map_count, c.map_size, c.map_density, cell)


def _job(sampler: str, s: SampleSet, pairwise: np.ndarray, map_id: int, m: OccupancyMap,
         queries, c: BenchConfig):
    checker = CollisionChecker(m, s.steer, s.topology, step=c.collision_step)
    rows, timings = [], []
    for n in sorted(c.n_schedule):
        t0 = time.perf_counter()
        prefix = s.prefix(n)
        rm = build_roadmap(prefix, checker, s.steer, pairwise=pairwise[:n, :n])
        timings.append((sampler, map_id, -1, n, "roadmap", time.perf_counter() - t0))
        planner = Planner(rm, checker)
        for q, (start, goal) in enumerate(queries):
            t0 = time.perf_counter()
            res = planner.query(start, goal)
            timings.append((sampler, map_id, q, n, "query", time.perf_counter() - t0))
            rows.append((sampler, map_id, q, n, res.success, res.cost if res.success else math.inf))
    return rows, timings


def run_benchmark(c: BenchConfig) -> BenchReport:
    c.validate()
    out = Path(c.output_dir)
    (out / "sets").mkdir(parents=True, exist_ok=True)
    (out / "maps").mkdir(exist_ok=True)
    steer = parse_steer(c.steer)
    maps = bench_maps(c)
    files = {"config": out / "config.txt"}
    files["config"].write_text(format_config(c), encoding="utf-8")
    for i, m in enumerate(maps):
        save_map(m, out / "maps" / f"map_{i:03d}.map")
    t = map_space(maps[0], steer) if maps else None
    n_max = max(c.n_schedule)
    dims = 3 if isinstance(steer, ReedsShepp) else 2
    queries = [random_queries(m, c.query_count, seed=[c.query_seed, i], dims=dims)
               for i, m in enumerate(maps)]

    sets, tables, timings = {}, {}, []
    for name in c.samplers:
        t0 = time.perf_counter()
        s = make_sample_set(name, n_max, t, steer, c.grid_resolution or None, c.border_mode)
        if len(s) < n_max:
            raise ValueError(f"sampler {name!r} produced {len(s)} < {n_max} samples")
        sets[name] = s
        save_sample_set(s, out / "sets" / f"{_safe_name(name)}.set")
        tables[name] = distance_matrix(s.samples, steer, t)
        timings.append((name, -1, -1, n_max, "samples", time.perf_counter() - t0))

    jobs = [(name, i) for name in c.samplers for i in range(len(maps))]

    def work(job):
        name, i = job
        return _job(name, sets[name], tables[name], i, maps[i], queries[i], c)

    if c.threads > 1:
        with ThreadPoolExecutor(max_workers=c.threads) as pool:
            outputs = list(pool.map(work, jobs))
    else:
        outputs = [work(j) for j in jobs]

    order = {name: k for k, name in enumerate(c.samplers)}
    rows = sorted((r for rs, _ in outputs for r in rs), key=lambda r: (order[r[0]], r[1], r[3], r[2]))
    timings += [tm for _, ts in outputs for tm in ts]

    files["queries"] = out / "queries.csv"
    with open(files["queries"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sampler", "map", "query", "n", "success", "cost"])
        for sampler, mid, q, n, ok, cost in rows:
            w.writerow([sampler, mid, q, n, int(ok), _fmt(cost)])

    costs = {name: {} for name in c.samplers}
    for sampler, mid, q, n, ok, cost in rows:
        costs[sampler][(mid, q, n)] = cost

    files["summary"] = out / "summary.csv"
    success_rate = {}
    with open(files["summary"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sampler", "n", "queries", "successes", "success_rate", "mean_cost"])
        for name in c.samplers:
            for n in sorted(c.n_schedule):
                vals = [v for (mid, q, nn), v in sorted(costs[name].items()) if nn == n]
                ok = [v for v in vals if not math.isinf(v)]
                rate = len(ok) / len(vals) if vals else 0.0
                success_rate[(name, n)] = rate
                mean = _fmt(math.fsum(ok) / len(ok)) if ok else ""
                w.writerow([name, n, len(vals), len(ok), repr(rate), mean])

    scores = {}
    files["scores"] = out / "scores.csv"
    with open(files["scores"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "sampler", "opponent", "raw", "score"])
        for n in sorted(c.n_schedule):
            per_n = {name: {k: v for k, v in costs[name].items() if k[2] == n} for name in c.samplers}
            sm = score_pairwise(per_n)
            scores[n] = sm
            for i, a in enumerate(sm.names):
                for j, b in enumerate(sm.names):
                    if i != j:
                        w.writerow([n, a, b, int(sm.raw[i, j]), repr(float(sm.scores[i, j]))])

    files["timings"] = out / "timings.csv"
    with open(files["timings"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sampler", "map", "query", "n", "stage", "seconds"])
        for row in timings:
            w.writerow([*row[:5], f"{row[5]:.6f}"])
    return BenchReport(c, files, costs, scores, success_rate)
