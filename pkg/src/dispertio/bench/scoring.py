"""Pairwise head-to-head scores between samplers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np


@dataclass
class ScoreMatrix:
    """``scores[i, j]``: summed per-query outcomes of sampler ``i`` against
    ``j`` divided by the square root of the number of queries."""

    names: list[str]
    raw: np.ndarray
    queries: int

    @property
    def scores(self) -> np.ndarray:
        if self.queries == 0:
            return np.zeros_like(self.raw, dtype=float)
        return self.raw / math.sqrt(self.queries)

    def score(self, a: str, b: str) -> float:
        return float(self.scores[self.names.index(a), self.names.index(b)])


def compare(cost_a: float, cost_b: float) -> int:
    """+1 if ``a`` is better, -1 if worse, 0 on a draw (``inf`` = failure)."""
    if cost_a < cost_b:
        return 1
    if cost_b < cost_a:
        return -1
    return 0


def score_pairwise(results: Mapping[str, Mapping[tuple, float]]) -> ScoreMatrix:
    """Score every pair of samplers over the same queries.

    ``results[name][key]`` is the solution cost of a query (``math.inf`` for a
    failure); all samplers must report the same keys. A success beats a
    failure, two failures draw, otherwise the lower cost wins.
    """
    names = list(results)
    keys = None
    for name in names:
        ks = set(results[name])
        if keys is None:
            keys = ks
        elif ks != keys:
            raise ValueError(f"results of {name!r} are not aligned with {names[0]!r}")
    keys = sorted(keys or ())
    raw = np.zeros((len(names), len(names)), dtype=np.int64)
    for i, a in enumerate(names):
        for j in range(i + 1, len(names)):
            b = names[j]
            total = sum(compare(results[a][k], results[b][k]) for k in keys)
            raw[i, j] = total
            raw[j, i] = -total
    return ScoreMatrix(names, raw, len(keys))
