"""Experiment harness: benchmark runs, scoring, dispersion trends and coverage."""

from .config import BenchConfig, format_config, load_config, parse_config
from .mapgen import random_maps, random_queries
from .plots import (coverage_plot, coverage_values, dispersion_trend, geometric_schedule,
                    plot_trend, trend_slope, uncovered_fraction, write_trend_csv)
from .run import BenchReport, run_benchmark
from .scoring import ScoreMatrix, compare, score_pairwise

__all__ = [
    "BenchConfig", "BenchReport", "ScoreMatrix", "compare", "coverage_plot", "coverage_values",
    "dispersion_trend", "format_config", "geometric_schedule", "load_config", "parse_config",
    "plot_trend", "random_maps", "random_queries", "run_benchmark", "score_pairwise",
    "trend_slope", "uncovered_fraction", "write_trend_csv",
]
