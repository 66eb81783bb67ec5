"""Finite graphs as oriented-edge structures, metric structures and reduced paths.

Each non-oriented edge ``x`` is stored as the pair of oriented edges ``x+``
(from the declared origin to the declared terminus) and ``x-`` (its inverse).
Edge order is declaration order with ``+`` before ``-``; every matrix in the
package is indexed by that order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateEdgeError,
    GraphSyntaxError,
    GraphValidationError,
    MetricError,
    PathError,
    UnknownVertexError,
)

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")

METRIC = "metric"
QUASI_METRIC = "quasi-metric"
SEMI_METRIC = "semi-metric"
SINGULAR = "singular"


def parse_number(text: str) -> float:
    """Parse a decimal or an exact fraction ``p/q``."""
    text = text.strip()
    try:
        if "/" in text:
            return float(Fraction(text))
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc


class Graph:
    """Connected finite graph with no degree-one vertices and rank at least 2.

    Oriented edges are addressed either by id (``"a+"``) or by integer index
    into :attr:`edges`.
    """

    def __init__(self, vertices: Sequence[str], edges: Sequence[tuple[str, str, str]], validate: bool = True):
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.base_edges: tuple[str, ...] = tuple(e[0] for e in edges)
        ids: list[str] = []
        origin: list[str] = []
        terminus: list[str] = []
        for name, u, v in edges:
            ids += [f"{name}+", f"{name}-"]
            origin += [u, v]
            terminus += [v, u]
        self.edges: tuple[str, ...] = tuple(ids)
        self.index: dict[str, int] = {e: i for i, e in enumerate(ids)}
        self._origin = tuple(origin)
        self._terminus = tuple(terminus)
        n = len(ids)
        # inverse of index i is i ^ 1 because orientations are stored in pairs
        self.inverse_index = np.arange(n) ^ 1
        self.successors: tuple[tuple[int, ...], ...] = tuple(
            tuple(j for j in range(n) if self._origin[j] == self._terminus[i] and j != (i ^ 1))
            for i in range(n)
        )
        self.predecessors: tuple[tuple[int, ...], ...] = tuple(
            tuple(j for j in range(n) if self._terminus[j] == self._origin[i] and j != (i ^ 1))
            for i in range(n)
        )
        self.degree: dict[str, int] = {v: 0 for v in self.vertices}
        for o in self._origin:
            self.degree[o] += 1
        if validate:
            self._validate()

    # basic counts -------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.edges)

    @property
    def num_edges(self) -> int:
        return len(self.base_edges)

    @property
    def rank(self) -> int:
        return self.num_edges - len(self.vertices) + 1

    def origin(self, e: str | int) -> str:
        return self._origin[self._idx(e)]

    def terminus(self, e: str | int) -> str:
        return self._terminus[self._idx(e)]

    def inverse(self, e: str) -> str:
        return self.edges[self.index[e] ^ 1]

    def b(self, e: str) -> tuple[str, ...]:
        """Reduced continuations of ``e``."""
        return tuple(self.edges[j] for j in self.successors[self._idx(e)])

    def a(self, e: str) -> tuple[str, ...]:
        """Edges that may precede ``e`` in a reduced path."""
        return tuple(self.edges[j] for j in self.predecessors[self._idx(e)])

    def out_edges(self, v: str) -> tuple[str, ...]:
        return tuple(e for e, o in zip(self.edges, self._origin) if o == v)

    def is_regular(self) -> bool:
        return len(set(self.degree.values())) == 1

    @property
    def degree_two_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.degree[v] == 2)

    def adjacency(self) -> np.ndarray:
        """0/1 adjacency matrix of the reduced line graph."""
        M = np.zeros((self.n, self.n))
        for i, succ in enumerate(self.successors):
            M[i, list(succ)] = 1.0
        return M

    def _idx(self, e: str | int) -> int:
        if isinstance(e, (int, np.integer)):
            return int(e)
        try:
            return self.index[e]
        except KeyError:
            raise PathError(f"unknown edge {e!r}") from None

    def _validate(self) -> None:
        if not self.vertices:
            raise GraphValidationError("graph has no vertices")
        low = [v for v in self.vertices if self.degree[v] < 2]
        if low:
            raise GraphValidationError(f"vertices of degree < 2: {', '.join(low)}")
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for o, t in zip(self._origin, self._terminus):
                if o == v and t not in seen:
                    seen.add(t)
                    stack.append(t)
        if len(seen) != len(self.vertices):
            raise GraphValidationError("graph is not connected")
        if self.rank < 2:
            raise GraphValidationError(f"rank {self.rank} < 2")

    def __repr__(self) -> str:
        return f"Graph(V={len(self.vertices)}, N={self.num_edges}, rank={self.rank})"


# parsing ------------------------------------------------------------------


def parse_graph_file(text: str) -> tuple[Graph, dict[str, float] | None]:
    """Parse graph-file text into a graph and its declared oriented lengths.

    The lengths mapping is ``None`` when the file declares no lengths at all.
    """
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    lengths: dict[str, float] = {}
    overrides: list[tuple[int, str, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        if kw == "vertex":
            if len(parts) != 2 or not _IDENT.match(parts[1]):
                raise GraphSyntaxError("expected 'vertex <id>'", lineno)
            if parts[1] in vertices:
                raise GraphSyntaxError(f"duplicate vertex {parts[1]!r}", lineno)
            vertices.append(parts[1])
        elif kw == "edge":
            if len(parts) not in (4, 5) or not _IDENT.match(parts[1]):
                raise GraphSyntaxError("expected 'edge <id> <from> <to> [<length>]'", lineno)
            name, u, v = parts[1:4]
            if any(name == e[0] for e in edges):
                raise DuplicateEdgeError(f"duplicate edge {name!r}", lineno)
            for w in (u, v):
                if w not in vertices:
                    raise UnknownVertexError(f"unknown vertex {w!r}", lineno)
            edges.append((name, u, v))
            if len(parts) == 5:
                try:
                    x = parse_number(parts[4])
                except ValueError as exc:
                    raise GraphSyntaxError(str(exc), lineno) from None
                lengths[f"{name}+"] = lengths[f"{name}-"] = x
        elif kw == "lenq":
            if len(parts) != 3:
                raise GraphSyntaxError("expected 'lenq <oriented-edge> <length>'", lineno)
            try:
                overrides.append((lineno, parts[1], parse_number(parts[2])))
            except ValueError as exc:
                raise GraphSyntaxError(str(exc), lineno) from None
        else:
            raise GraphSyntaxError(f"unknown keyword {kw!r}", lineno)

    g = Graph(vertices, edges)
    if lengths and len(lengths) != g.n:
        missing = sorted({e[:-1] for e in g.edges if e not in lengths})
        raise GraphSyntaxError(f"edges without length: {', '.join(missing)}")
    for lineno, e, x in overrides:
        if e not in g.index:
            raise GraphSyntaxError(f"unknown oriented edge {e!r}", lineno)
        if not lengths:
            raise GraphSyntaxError("lenq requires declared edge lengths", lineno)
        lengths[e] = x
    return g, (lengths or None)


def parse_graph(text: str) -> Graph:
    return parse_graph_file(text)[0]


# metric structures --------------------------------------------------------


@dataclass(frozen=True)
class MetricStructure:
    """Length assignment on the oriented edges of ``graph``.

    ``lengths`` is indexed by the graph's oriented-edge order.
    """

    graph: Graph
    lengths: np.ndarray
    classification: str
    volume: float

    @property
    def symmetric(self) -> bool:
        return bool(np.array_equal(self.lengths, self.lengths[self.graph.inverse_index]))

    @property
    def usable(self) -> bool:
        return self.classification != SINGULAR

    def length(self, e: str) -> float:
        return float(self.lengths[self.graph.index[e]])

    def as_dict(self) -> dict[str, float]:
        return {e: float(x) for e, x in zip(self.graph.edges, self.lengths)}

    def scaled(self, c: float) -> MetricStructure:
        return classify_metric(self.graph, c * self.lengths)


def _zero_set_has_cycle(g: Graph, zero_edges: Sequence[str]) -> bool:
    parent = {v: v for v in g.vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in zero_edges:
        ru, rv = find(g.origin(e)), find(g.terminus(e))
        if ru == rv:
            return True
        parent[ru] = rv
    return False


def classify_metric(g: Graph, lengths: Mapping[str, float] | Sequence[float] | np.ndarray) -> MetricStructure:
    """Classify a length assignment and compute its volume.

    ``lengths`` is either a mapping over oriented edge ids or an array in the
    graph's oriented-edge order.
    """
    if isinstance(lengths, Mapping):
        unknown = set(lengths) - set(g.index)
        if unknown:
            raise MetricError(f"unknown edges: {', '.join(sorted(unknown))}")
        missing = [e for e in g.edges if e not in lengths]
        if missing:
            raise MetricError(f"missing lengths for: {', '.join(missing)}")
        arr = np.array([float(lengths[e]) for e in g.edges])
    else:
        arr = np.array(lengths, dtype=float)
        if arr.shape != (g.n,):
            raise MetricError(f"expected {g.n} oriented lengths, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise MetricError("lengths must be finite")
    if np.any(arr < 0):
        raise MetricError("negative length")
    arr.setflags(write=False)

    symmetric = bool(np.array_equal(arr, arr[g.inverse_index]))
    if np.all(arr > 0):
        kind = METRIC if symmetric else QUASI_METRIC
    elif symmetric:
        zeros = [g.edges[i] for i in range(0, g.n, 2) if arr[i] == 0]
        kind = SINGULAR if _zero_set_has_cycle(g, zeros) else SEMI_METRIC
    else:
        kind = SINGULAR
    return MetricStructure(g, arr, kind, 0.5 * float(arr.sum()))


def symmetric_lengths(g: Graph, per_edge: Sequence[float] | Mapping[str, float]) -> np.ndarray:
    """Expand non-oriented lengths (declaration order or by base id) to oriented order."""
    if isinstance(per_edge, Mapping):
        per_edge = [per_edge[name] for name in g.base_edges]
    x = np.asarray(per_edge, dtype=float)
    if x.shape != (g.num_edges,):
        raise MetricError(f"expected {g.num_edges} edge lengths, got {x.shape}")
    return np.repeat(x, 2)


def metric_from_edges(g: Graph, per_edge: Sequence[float] | Mapping[str, float]) -> MetricStructure:
    return classify_metric(g, symmetric_lengths(g, per_edge))


def uniform_metric(g: Graph) -> MetricStructure:
    return metric_from_edges(g, [1.0 / g.num_edges] * g.num_edges)


# reduced paths --------------------------------------------------------------


@dataclass(frozen=True)
class ReducedPath:
    graph: Graph = field(repr=False, compare=False)
    edges: tuple[str, ...]

    def __post_init__(self):
        if not self.edges:
            raise PathError("a path needs at least one edge")
        g = self.graph
        for e in self.edges:
            if e not in g.index:
                raise PathError(f"unknown edge {e!r}")
        for e, f in zip(self.edges, self.edges[1:]):
            if g.terminus(e) != g.origin(f):
                raise PathError(f"{e} and {f} are not consecutive")
            if f == g.inverse(e):
                raise PathError(f"backtrack {e} {f}")

    @property
    def origin(self) -> str:
        return self.graph.origin(self.edges[0])

    @property
    def terminus(self) -> str:
        return self.graph.terminus(self.edges[-1])

    @property
    def closed(self) -> bool:
        return self.origin == self.terminus

    def __len__(self) -> int:
        return len(self.edges)

    def occurrence_counts(self) -> dict[str, int]:
        counts = {e: 0 for e in self.graph.edges}
        for e in self.edges:
            counts[e] += 1
        return counts

    def inverse(self) -> ReducedPath:
        return ReducedPath(self.graph, tuple(self.graph.inverse(e) for e in reversed(self.edges)))

    def metric_length(self, m: MetricStructure) -> float:
        idx = [self.graph.index[e] for e in self.edges]
        return float(m.lengths[idx].sum())


def path(g: Graph, edges: Sequence[str] | str) -> ReducedPath:
    if isinstance(edges, str):
        edges = edges.split()
    return ReducedPath(g, tuple(edges))


def _lex_successors(g: Graph) -> list[list[int]]:
    return [sorted(s, key=lambda j: g.edges[j]) for s in g.successors]


def enumerate_reduced_paths(g: Graph, origin: str, max_edges: int) -> Iterator[ReducedPath]:
    """Yield every reduced path from ``origin`` with at most ``max_edges`` edges.

    Order is by edge count, then lexicographic in edge ids.
    """
    if max_edges < 1:
        raise ValueError("max_edges must be >= 1")
    if origin not in g.degree:
        raise PathError(f"unknown vertex {origin!r}")
    succ = _lex_successors(g)
    starts = sorted((g.index[e] for e in g.out_edges(origin)), key=lambda j: g.edges[j])
    for t in range(1, max_edges + 1):
        for labels in _paths_of_length(succ, starts, t):
            yield ReducedPath(g, tuple(g.edges[j] for j in labels))


def _paths_of_length(succ: list[list[int]], starts: Sequence[int], t: int) -> Iterator[tuple[int, ...]]:
    stack: list[tuple[int, ...]] = [(j,) for j in reversed(starts)]
    while stack:
        p = stack.pop()
        if len(p) == t:
            yield p
            continue
        stack.extend(p + (j,) for j in reversed(succ[p[-1]]))


def all_reduced_labels(g: Graph, max_edges: int) -> Iterator[tuple[str, ...]]:
    """Every reduced path label in the graph (any origin), same ordering rule."""
    succ = _lex_successors(g)
    starts = sorted(range(g.n), key=lambda j: g.edges[j])
    for t in range(1, max_edges + 1):
        for labels in _paths_of_length(succ, starts, t):
            yield tuple(g.edges[j] for j in labels)


def cyclic_reduction(loop: ReducedPath) -> tuple[str, ...]:
    if not loop.closed:
        raise PathError("loop is not closed")
    g = loop.graph
    edges = list(loop.edges)
    while len(edges) >= 2 and edges[-1] == g.inverse(edges[0]):
        edges = edges[1:-1]
    return tuple(edges)


def translation_length(m: MetricStructure, loop: ReducedPath) -> float:
    """Metric length of the cyclic reduction of a closed reduced path."""
    core = cyclic_reduction(loop)
    idx = [m.graph.index[e] for e in core]
    return float(m.lengths[idx].sum())
