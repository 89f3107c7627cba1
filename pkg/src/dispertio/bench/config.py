"""Flat ``key = value`` benchmark configuration."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.replace(",", " ").split())


def _words(text: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in text.split(",") if v.strip())


@dataclass
class BenchConfig:
    """Benchmark description; the config file uses these field names as keys.

    For Reeds-Shepp steers the world width is ``rho / eta`` and the cell size
    follows from ``map_size``; otherwise ``cell_size`` applies. Empty
    ``grid_resolution`` selects the default for the space.
    """

    steer: str = "reeds-shepp:5"
    samplers: tuple[str, ...] = ("dispertio", "halton", "iid(1)")
    n_schedule: tuple[int, ...] = (100, 500)
    map_source: str = "generated"
    map_files: tuple[str, ...] = ()
    map_seed: int = 1
    map_count: int = 1
    map_size: int = 32
    map_density: float = 0.2
    cell_size: float = 1.0
    query_count: int = 10
    query_seed: int = 1
    eta: float = 0.1
    collision_step: float | None = None
    grid_resolution: tuple[int, ...] = ()
    border_mode: str | None = None
    threads: int = 1
    output_dir: str = "bench-out"

    def validate(self) -> "BenchConfig":
        if not self.eta > 0:
            raise ValueError("eta must be positive")
        if not self.samplers:
            raise ValueError("at least one sampler is needed")
        if len(set(self.samplers)) != len(self.samplers):
            raise ValueError("duplicate sampler names")
        if not self.n_schedule or min(self.n_schedule) < 1:
            raise ValueError("n_schedule needs positive sample counts")
        if self.map_source not in ("generated", "files"):
            raise ValueError("map_source must be 'generated' or 'files'")
        if self.map_source == "files" and not self.map_files:
            raise ValueError("map_source = files needs map_files")
        if self.query_count < 0 or self.map_count < 0 or self.threads < 1:
            raise ValueError("counts must be non-negative and threads positive")
        if self.collision_step is not None and not self.collision_step > 0:
            raise ValueError("collision_step must be positive")
        return self


_PARSERS = {
    "samplers": _words, "map_files": _words,
    "n_schedule": _ints, "grid_resolution": _ints,
    "map_seed": int, "map_count": int, "map_size": int, "query_count": int,
    "query_seed": int, "threads": int,
    "map_density": float, "cell_size": float, "eta": float,
    "collision_step": lambda v: None if v.lower() in ("", "none", "default") else float(v),
    "border_mode": lambda v: None if v.lower() in ("", "default") else v,
}


def parse_config(text: str) -> BenchConfig:
    names = {f.name for f in dataclasses.fields(BenchConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        if key not in names:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _PARSERS.get(key, str)(value)
    return BenchConfig(**values).validate()


def load_config(path) -> BenchConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def format_config(c: BenchConfig) -> str:
    lines = []
    for f in dataclasses.fields(c):
        v = getattr(c, f.name)
        if isinstance(v, tuple):
            v = ", ".join(str(x) for x in v)
        elif v is None:
            v = "default"
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"
