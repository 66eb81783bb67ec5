"""Built-in graphs: roses, theta graphs, the dumbbell and K4."""

from __future__ import annotations

import re
from typing import Mapping, Sequence

from .errors import CatalogError
from .graph import Graph, MetricStructure, classify_metric, metric_from_edges, uniform_metric


def rose(k: int) -> Graph:
    """One vertex with ``k`` loops ``g1..gk``."""
    return Graph(["p"], [(f"g{i}", "p", "p") for i in range(1, k + 1)])


def theta(m: int = 3) -> Graph:
    """Two vertices joined by ``m`` parallel edges; ``m=3`` uses ids a, b, c."""
    names = "abc" if m == 3 else [f"e{i}" for i in range(1, m + 1)]
    return Graph(["u", "v"], [(x, "u", "v") for x in names])


def dumbbell() -> Graph:
    return Graph(["u", "v"], [("x", "u", "u"), ("bridge", "u", "v"), ("y", "v", "v")])


def k4() -> Graph:
    vs = ["v1", "v2", "v3", "v4"]
    edges = [(f"e{i}{j}", vs[i - 1], vs[j - 1]) for i in range(1, 5) for j in range(i + 1, 5)]
    return Graph(vs, edges)


def double_loop_theta() -> Graph:
    """4-regular rank-3 graph: a loop at each of two vertices plus two parallel edges."""
    return Graph(["u", "v"], [("x", "u", "u"), ("a", "u", "v"), ("b", "u", "v"), ("y", "v", "v")])


_FIXED = {"theta": lambda: theta(3), "dumbbell": dumbbell, "K4": k4, "double-loop-theta": double_loop_theta}
_PARAM = {"rose": rose, "theta": theta}
_PATTERN = re.compile(r"^(\w+)\((\d+)\)$")

NAMES = ("rose(k)", "theta", "theta(m)", "dumbbell", "K4", "double-loop-theta")


def catalog_graph(name: str) -> Graph:
    name = name.strip()
    if name in _FIXED:
        return _FIXED[name]()
    match = _PATTERN.match(name)
    if match and match.group(1) in _PARAM:
        arg = int(match.group(2))
        try:
            return _PARAM[match.group(1)](arg)
        except Exception as exc:
            raise CatalogError(f"{name}: {exc}") from exc
    raise CatalogError(f"unknown catalog graph {name!r}; known: {', '.join(NAMES)}")


def catalog(
    name: str, lengths: Sequence[float] | Mapping[str, float] | None = None
) -> tuple[Graph, MetricStructure]:
    """Named graph with its uniform volume-one structure, or with ``lengths``.

    ``lengths`` may be non-oriented (one value per declared edge) or oriented
    (one value per oriented edge, or a mapping by oriented id).
    """
    g = catalog_graph(name)
    if lengths is None:
        return g, uniform_metric(g)
    if isinstance(lengths, Mapping):
        if set(lengths) <= set(g.base_edges):
            return g, metric_from_edges(g, lengths)
        return g, classify_metric(g, lengths)
    if len(lengths) == g.num_edges:
        return g, metric_from_edges(g, lengths)
    return g, classify_metric(g, lengths)


# graphs used by the property and acceptance suites
STANDARD = ("theta", "dumbbell", "K4", "rose(2)")
