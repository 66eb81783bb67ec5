"""Patterson-Sullivan current values on cylinder sets.

Values are stored by path label in the base graph; the universal cover is never
built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .entropy import EntropySolution, volume_entropy
from .errors import BudgetExceededError, MetricError, PathError
from .graph import Graph, ReducedPath, all_reduced_labels, metric_from_edges

DEFAULT_TABLE_CAP = 2_000_000


def _check_symmetric(sol: EntropySolution) -> None:
    if not sol.metric.symmetric:
        raise MetricError("currents require a symmetric (metric or semi-metric) structure")


def _successor_sums(sol: EntropySolution) -> np.ndarray:
    """``S[e] = sum over b(e) of w``."""
    w = sol.weights
    return np.array([w[list(s)].sum() for s in sol.graph.successors])


def cylinder_measure(sol: EntropySolution, gamma: ReducedPath | tuple[str, ...]) -> float:
    """Current of the cylinder of a reduced path.

    ``exp(-h L(gamma)) * S(first^-1) * S(last)`` where ``S(e)`` sums the weights
    over the reduced continuations of ``e``.
    """
    _check_symmetric(sol)
    g = sol.graph
    if not isinstance(gamma, ReducedPath):
        gamma = ReducedPath(g, tuple(gamma))
    elif gamma.graph is not g:
        gamma = ReducedPath(g, gamma.edges)
    idx = [g.index[e] for e in gamma.edges]
    S = _successor_sums(sol)
    length = float(sol.metric.lengths[idx].sum())
    return math.exp(-sol.h * length) * S[idx[0] ^ 1] * S[idx[-1]]


@dataclass(frozen=True)
class CurrentTable:
    solution: EntropySolution
    labels: tuple[tuple[str, ...], ...]
    raw: np.ndarray
    max_edges: int

    @property
    def projective(self) -> np.ndarray:
        single = np.array([len(lab) == 1 for lab in self.labels])
        return self.raw / self.raw[single].sum()

    def values(self, normalization: str = "raw") -> dict[tuple[str, ...], float]:
        data = self.raw if normalization == "raw" else self.projective
        return dict(zip(self.labels, map(float, data)))

    def scaled(self, c: float) -> CurrentTable:
        return CurrentTable(self.solution, self.labels, c * self.raw, self.max_edges)

    def records(self) -> Iterator[tuple[str, float, float]]:
        """Export rows ``(label, raw, projective)`` in path order."""
        for lab, r, p in zip(self.labels, self.raw, self.projective):
            yield " ".join(lab), float(r), float(p)


def current_coordinates(sol: EntropySolution, max_edges: int, cap: int = DEFAULT_TABLE_CAP) -> CurrentTable:
    """Current values on every reduced-path label with at most ``max_edges`` edges."""
    _check_symmetric(sol)
    if max_edges < 1:
        raise ValueError("max_edges must be >= 1")
    g = sol.graph
    S = _successor_sums(sol)
    L = sol.metric.lengths
    labels = []
    raw = []
    for lab in all_reduced_labels(g, max_edges):
        if len(labels) >= cap:
            raise BudgetExceededError(f"current table exceeds {cap} entries")
        idx = [g.index[e] for e in lab]
        labels.append(lab)
        raw.append(math.exp(-sol.h * L[idx].sum()) * S[idx[0] ^ 1] * S[idx[-1]])
    return CurrentTable(sol, tuple(labels), np.array(raw), max_edges)


def projectively_distinct(t1: CurrentTable, t2: CurrentTable, tol: float = 1e-8) -> bool:
    """Whether the projective tables differ in some entry by more than ``tol`` relative."""
    if t1.labels != t2.labels or t1.max_edges != t2.max_edges:
        raise PathError("tables cover different graphs or horizons")
    p1, p2 = t1.projective, t2.projective
    rel = np.abs(p1 - p2) / np.maximum(np.abs(p1), np.abs(p2))
    return bool(np.any(rel > tol))


def consistency_errors(table: CurrentTable) -> dict[str, float]:
    """Largest relative defect of prefix/suffix additivity and flip invariance."""
    g = table.solution.graph
    value = dict(zip(table.labels, table.raw))
    prefix = suffix = flip = 0.0
    for lab, v in value.items():
        inv = tuple(g.inverse(e) for e in reversed(lab))
        flip = max(flip, abs(value[inv] - v) / v)
        if len(lab) < table.max_edges:
            right = sum(value[lab + (f,)] for f in g.b(lab[-1]))
            left = sum(value[(f,) + lab] for f in g.a(lab[0]))
            prefix = max(prefix, abs(right - v) / v)
            suffix = max(suffix, abs(left - v) / v)
    return {"prefix": prefix, "suffix": suffix, "flip": flip}


def degeneration_probe(g: Graph, family: Callable[[float], Sequence[float]], eps: Sequence[float],
                       max_edges: int = 3) -> list[tuple[float, float]]:
    """Max projective deviation from the limit table along a degenerating family.

    ``family(e)`` gives non-oriented lengths; ``family(0)`` is the limit
    structure, typically semi-metric. Returns ``(e, max |p_e - p_0|)`` per ``e``.
    """
    def table(e: float) -> CurrentTable:
        return current_coordinates(volume_entropy(g, metric_from_edges(g, family(e))), max_edges)

    limit = table(0.0).projective
    return [(float(e), float(np.max(np.abs(table(e).projective - limit)))) for e in eps]
