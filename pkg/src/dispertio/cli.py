"""Command line entry point: ``python -m dispertio <command>``.

Exit status is 0 on success, 2 when planning finds no path, 1 on any error.
"""

from __future__ import annotations

import argparse
import sys

from .bench import (coverage_plot, dispersion_trend, geometric_schedule, load_config,
                    plot_trend, run_benchmark, write_trend_csv)
from .dispersion import bordered_grid, load_sample_set, measure_dispersion, save_sample_set
from .maps import ChainModel, CollisionChecker, load_map
from .prm import Planner, PlanningError, build_roadmap, save_roadmap
from .samplers import default_resolution, make_sample_set
from .space import parse_space
from .steer import parse_steer


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.replace(",", " ").split())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.replace(",", " ").split())


def _grid_for(s, resolution, border_mode=None):
    res = resolution or default_resolution(s.topology, s.steer)
    return bordered_grid(s.topology, res, s.steer, border_mode)


def cmd_sample(args) -> int:
    t = parse_space(args.space)
    steer = parse_steer(args.steer)
    s = make_sample_set(args.sampler, args.n, t, steer, args.resolution, args.border_mode)
    save_sample_set(s, args.out)
    print(f"wrote {len(s)} {s.generator} samples to {args.out}")
    return 0


def cmd_dispersion(args) -> int:
    if args.trend:
        if not (args.space and args.steer and args.samplers and args.n_max):
            raise ValueError("--trend needs --space, --steer, --samplers and --n-max")
        t = parse_space(args.space)
        steer = parse_steer(args.steer)
        res = args.resolution or default_resolution(t, steer)
        sets = {name: make_sample_set(name, args.n_max, t, steer, res)
                for name in args.samplers.split(",")}
        g = bordered_grid(t, res, steer)
        rows = dispersion_trend(sets, args.n_max, g, steer, geometric_schedule(args.n_max))
        if args.out:
            write_trend_csv(rows, args.out)
        else:
            for name, n, v in rows:
                print(f"{name},{n},{v!r}")
        if args.plot:
            plot_trend(rows, args.plot)
        return 0
    if not args.set:
        raise ValueError("give --set FILE or --trend")
    s = load_sample_set(args.set)
    g = _grid_for(s, args.resolution)
    print(repr(measure_dispersion(s, g, s.steer)))
    return 0


def cmd_plan(args) -> int:
    s = load_sample_set(args.set)
    m = load_map(args.map, args.cell_size)
    chain = ChainModel(base=_floats(args.chain_base)) if args.chain_base else None
    checker = CollisionChecker(m, s.steer, s.topology, chain, args.step)
    start, goal = _floats(args.start), _floats(args.goal)
    for name, x in (("start", start), ("goal", goal)):
        if not checker.state_free(x):
            raise PlanningError(f"{name} state {x} is in collision")
    rm = build_roadmap(s, checker, s.steer, k=args.k, radius=args.radius)
    if args.roadmap_out:
        save_roadmap(rm, args.roadmap_out)
    res = Planner(rm, checker).query(start, goal)
    if not res.success:
        print("no path found")
        return 2
    print(f"cost {res.cost!r}")
    for p in res.path:
        print(" ".join(format(v, ".17g") for v in p))
    return 0


def cmd_bench(args) -> int:
    c = load_config(args.config)
    if args.threads:
        c.threads = args.threads
    report = run_benchmark(c)
    for name, path in report.files.items():
        print(f"{name}: {path}")
    return 0


def cmd_coverage(args) -> int:
    s = load_sample_set(args.set)
    g = _grid_for(s, args.resolution)
    fixed = {}
    for item in args.slice or []:
        k, _, v = item.partition("=")
        fixed[int(k)] = float(v)
    frac = coverage_plot(s, g, s.steer, args.out, r=args.radius, fixed=fixed, border=args.border)
    print(f"uncovered fraction {frac!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dispertio", description="Dispersion-optimised motion-planning samples")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="generate a sample set")
    sp.add_argument("--space", required=True, help="e.g. 0:10,0:10,-pi:pi~")
    sp.add_argument("--steer", required=True, help="euclidean[:w,...] or reeds-shepp:rho")
    sp.add_argument("--sampler", required=True, help="dispertio, halton, sukharev or iid(seed)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--resolution", type=_ints)
    sp.add_argument("--border-mode", choices=["analytic", "border-samples", "none"])
    sp.set_defaults(func=cmd_sample)

    dp = sub.add_parser("dispersion", help="measure dispersion of a set, or a trend over n")
    dp.add_argument("--set")
    dp.add_argument("--trend", action="store_true")
    dp.add_argument("--space")
    dp.add_argument("--steer")
    dp.add_argument("--samplers", help="comma separated sampler names")
    dp.add_argument("--n-max", type=int)
    dp.add_argument("--resolution", type=_ints)
    dp.add_argument("--out", help="trend CSV (stdout if omitted)")
    dp.add_argument("--plot", help="trend SVG")
    dp.set_defaults(func=cmd_dispersion)

    pp = sub.add_parser("plan", help="plan one query with PRM* over a sample set")
    pp.add_argument("--map", required=True)
    pp.add_argument("--start", required=True, help="comma separated state")
    pp.add_argument("--goal", required=True)
    pp.add_argument("--set", required=True)
    pp.add_argument("--cell-size", type=float, default=1.0)
    pp.add_argument("--k", type=int)
    pp.add_argument("--radius", type=float)
    pp.add_argument("--step", type=float)
    pp.add_argument("--chain-base", help="x,y of a 6-link chain base (joint-space sets)")
    pp.add_argument("--roadmap-out")
    pp.set_defaults(func=cmd_plan)

    bp = sub.add_parser("bench", help="run a benchmark from a config file")
    bp.add_argument("--config", required=True)
    bp.add_argument("--threads", type=int)
    bp.set_defaults(func=cmd_bench)

    cp = sub.add_parser("coverage", help="coverage SVG of a sample set")
    cp.add_argument("--set", required=True)
    cp.add_argument("--out", required=True)
    cp.add_argument("--radius", type=float)
    cp.add_argument("--resolution", type=_ints)
    cp.add_argument("--slice", action="append", help="dim=value for dimensions beyond the plot plane")
    cp.add_argument("--border", action="store_true", help="include the border distance")
    cp.set_defaults(func=cmd_coverage)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
