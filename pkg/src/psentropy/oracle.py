"""Brute-force and Monte Carlo cross-checks that avoid the spectral machinery.

Everything here walks the reduced-path tree directly. Random walks use
numpy's Philox4x64 counter-based generator, so a seed fixes the output on
every platform.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import BudgetExceededError, PathError
from .graph import Graph, MetricStructure

DEFAULT_BUDGET = 10**7
# relative slack when comparing a path length against R, absorbs decimal rounding
LENGTH_SLACK = 1e-12


@dataclass(frozen=True)
class GrowthEstimate:
    samples: list[tuple[float, int]]
    h_hat: float
    path_budget: int
    truncated: bool = False


@dataclass(frozen=True)
class WalkStats:
    edge_frequency: dict[str, float]
    counts: np.ndarray = field(repr=False)
    steps: int
    trials: int
    seed: int

    def sigma(self, p: float) -> float:
        """Binomial standard error of a frequency with true value ``p``."""
        return math.sqrt(p * (1 - p) / (self.steps * self.trials))


def _start_edges(g: Graph, origin: str | None) -> list[int]:
    origin = g.vertices[0] if origin is None else origin
    if origin not in g.degree:
        raise PathError(f"unknown vertex {origin!r}")
    return [g.index[e] for e in g.out_edges(origin)]


def growth_count(g: Graph, m: MetricStructure, R: float, origin: str | None = None,
                 budget: int = DEFAULT_BUDGET) -> int:
    """Number of reduced paths from ``origin`` with metric length at most ``R``.

    Depth-first over the path tree; subtrees hanging off the same last edge with
    the same remaining length are counted once and reused.
    """
    if np.any(m.lengths <= 0):
        raise ValueError("growth counting needs positive lengths")
    if R <= 0:
        raise ValueError("R must be positive")
    L = [Fraction(float(x)) for x in m.lengths]
    limit = Fraction(R) * (1 + Fraction(LENGTH_SLACK))
    succ = g.successors

    @lru_cache(maxsize=None)
    def subtree(e: int, remaining: Fraction) -> int:
        # paths that continue after edge e, including e itself
        total = 1
        for f in succ[e]:
            if L[f] <= remaining:
                total += subtree(f, remaining - L[f])
                if total > budget:
                    raise BudgetExceededError(f"more than {budget} paths")
        return total

    count = 0
    for e in _start_edges(g, origin):
        if L[e] <= limit:
            count += subtree(e, limit - L[e])
            if count > budget:
                raise BudgetExceededError(f"more than {budget} paths")
    return count


def count_paths_of_length(g: Graph, t: int, origin: str | None = None) -> int:
    """Reduced paths with exactly ``t`` edges, from ``origin`` or from anywhere."""
    starts = range(g.n) if origin is None else _start_edges(g, origin)
    counts = {e: 1 for e in starts}
    for _ in range(t - 1):
        nxt: dict[int, int] = {}
        for e, c in counts.items():
            for f in g.successors[e]:
                nxt[f] = nxt.get(f, 0) + c
        counts = nxt
    return sum(counts.values())


def default_growth_grid(g: Graph, m: MetricStructure, points: int = 200) -> list[float]:
    step = float(m.lengths.max())
    return [step * j for j in range(1, points + 1)]


def estimate_entropy_growth(g: Graph, m: MetricStructure, Rgrid: Sequence[float] | None = None,
                            origin: str | None = None, budget: int = DEFAULT_BUDGET) -> GrowthEstimate:
    """Slope of ``log N(R)`` against ``R`` over the largest half of the grid.

    Grid points whose count would exceed ``budget`` are dropped with a warning.
    """
    grid = default_growth_grid(g, m) if Rgrid is None else list(Rgrid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("Rgrid must be increasing")
    samples = []
    truncated = False
    for R in grid:
        try:
            samples.append((float(R), growth_count(g, m, R, origin, budget)))
        except BudgetExceededError:
            truncated = True
            break
    if truncated and Rgrid is not None:
        warnings.warn(f"path budget {budget} truncated the grid at R={R:g}", stacklevel=2)
    if len(samples) < 4:
        raise ValueError(f"only {len(samples)} usable grid points; need at least 4")
    tail = samples[len(samples) // 2:]
    R = np.array([s[0] for s in tail])
    logN = np.log([s[1] for s in tail])
    slope = float(np.polyfit(R, logN, 1)[0])
    return GrowthEstimate(samples, slope, budget, truncated)


def poincare_partial(g: Graph, m: MetricStructure, s: float, max_edges: int,
                     basepoint: str | None = None) -> float:
    """Truncated Poincare series: ``1 + sum exp(-s L(w))`` over reduced loops at the basepoint."""
    if s <= 0:
        raise ValueError("s must be positive")
    basepoint = g.vertices[0] if basepoint is None else basepoint
    starts = _start_edges(g, basepoint)
    total = 1.0
    # weight of all reduced paths from the basepoint, grouped by last edge
    frontier = {e: math.exp(-s * m.lengths[e]) for e in starts}
    for _ in range(max_edges):
        total += sum(w for e, w in frontier.items() if g.terminus(e) == basepoint)
        nxt: dict[int, float] = {}
        for e, w in frontier.items():
            for f in g.successors[e]:
                nxt[f] = nxt.get(f, 0.0) + w * math.exp(-s * m.lengths[f])
        frontier = nxt
    return total


def nbrw_simulate(g: Graph, steps: int, trials: int, seed: int = 0, origin: str | None = None) -> WalkStats:
    """Non-backtracking random walk edge frequencies.

    Each trial starts on an edge drawn uniformly from those leaving ``origin``
    and moves to a uniformly chosen reduced continuation, ``steps`` edges in all.
    """
    if steps < 1 or trials < 1:
        raise ValueError("steps and trials must be >= 1")
    rng = np.random.Generator(np.random.Philox(seed))
    starts = np.array(_start_edges(g, origin))
    width = max(len(s) for s in g.successors)
    table = np.zeros((g.n, width), dtype=np.int64)
    outdeg = np.array([len(s) for s in g.successors])
    for i, s in enumerate(g.successors):
        table[i, : len(s)] = s
    state = starts[rng.integers(0, len(starts), size=trials)]
    counts = np.bincount(state, minlength=g.n)
    for _ in range(steps - 1):
        pick = (rng.random(trials) * outdeg[state]).astype(np.int64)
        state = table[state, pick]
        counts += np.bincount(state, minlength=g.n)
    freq = counts / counts.sum()
    return WalkStats(dict(zip(g.edges, map(float, freq))), counts, steps, trials, seed)
