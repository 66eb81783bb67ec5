"""Volume entropy as the root of ``Phi(s) = 1`` and Patterson-Sullivan edge weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketError, ConvergenceError, PathError, SingularStructureError
from .graph import Graph, MetricStructure, classify_metric
from .spectral import SpectralData, _perron_vector, default_tol, spectral_radius, transfer_matrix

MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class EntropySolution:
    graph: Graph = field(repr=False)
    metric: MetricStructure = field(repr=False)
    h: float
    Y: np.ndarray = field(repr=False)
    Z: np.ndarray = field(repr=False)
    residual: float
    bracket: tuple[float, float]
    iterations: int
    tol: float
    weight_scaling: str = "unit-norm"

    @property
    def weights(self) -> np.ndarray:
        """Edge weights ``w_e`` in oriented-edge order."""
        if self.weight_scaling == "sum-one":
            return self.Y / self.Y.sum()
        return self.Y

    def weight_map(self) -> dict[str, float]:
        return dict(zip(self.graph.edges, map(float, self.weights)))

    def with_scaling(self, scaling: str) -> EntropySolution:
        if scaling not in ("unit-norm", "sum-one"):
            raise ValueError(f"unknown weight scaling {scaling!r}")
        return EntropySolution(
            self.graph, self.metric, self.h, self.Y, self.Z, self.residual,
            self.bracket, self.iterations, self.tol, scaling,
        )

    def conformal_residual(self) -> np.ndarray:
        """Per-edge ``|w_e - exp(-h L_e) * sum_{b(e)} w| / w_e``."""
        w = self.weights
        A = transfer_matrix(self.graph, self.metric, self.h).A
        return np.abs(w - A @ w) / w


class _Phi:
    """Evaluates Phi(s) with warm-started power iteration."""

    def __init__(self, g: Graph, m: MetricStructure, tol: float):
        self.M = g.adjacency()
        self.L = m.lengths
        self.tol = tol
        self.max_iter = 100 * g.n * g.n
        self.start: np.ndarray | None = None
        self.iterations = 0

    def __call__(self, s: float) -> float:
        A = np.exp(-s * self.L)[:, None] * self.M
        r, y, it = _perron_vector(A, self.tol, self.max_iter, self.start)
        self.start = y
        self.iterations += it
        return r


def volume_entropy(g: Graph, m: MetricStructure, tol: float | None = None) -> EntropySolution:
    """Unique ``s > 0`` with ``Phi(s) = 1``.

    Brackets by doubling from ``s = 1`` then bisects on the monotone ``Phi``
    until ``|Phi(s) - 1| <= tol``, with a secant step on the final bracket.
    """
    if not m.usable:
        raise SingularStructureError(f"structure is {m.classification}; entropy undefined")
    tol = default_tol() if tol is None else tol
    f = _Phi(g, m, tol)

    lo, hi = 0.0, 1.0
    f_hi = f(hi)
    doublings = 0
    while f_hi >= 1.0:
        lo = hi
        hi *= 2.0
        doublings += 1
        if doublings > MAX_DOUBLINGS:
            raise BracketError("no s with Phi(s) < 1 found")
        f_hi = f(hi)
    f_lo = f(lo) if lo > 0 else f(0.0)

    s, f_s = hi, f_hi
    for _ in range(200):
        if abs(f_s - 1.0) <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = f(mid)
        if f_mid > 1.0:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        s, f_s = mid, f_mid
        if hi - lo <= 1e-3 * tol * max(hi, 1.0):
            break
    # secant polish inside the final bracket
    if f_lo != f_hi:
        cand = lo + (f_lo - 1.0) * (hi - lo) / (f_lo - f_hi)
        if lo < cand < hi:
            f_cand = f(cand)
            if abs(f_cand - 1.0) < abs(f_s - 1.0):
                s, f_s = cand, f_cand
    if abs(f_s - 1.0) > 10 * tol:
        raise ConvergenceError(f"|Phi(h) - 1| = {abs(f_s - 1):.3g} exceeds tolerance {tol:g}")

    A = transfer_matrix(g, m, s)
    sd: SpectralData = spectral_radius(A, tol=tol, start=f.start)
    return EntropySolution(g, m, float(s), sd.Y, sd.Z, float(abs(sd.radius - 1.0)), (lo, hi), f.iterations + sd.iterations, tol)


def uniform_entropy_closed_form(m: int, k: int) -> float:
    """Entropy of the uniform volume-one structure on an ``m``-regular rank-``k`` graph."""
    if m < 3 or k < 2:
        raise ValueError("need m >= 3 and k >= 2")
    return m * (k - 1) / (m - 2) * math.log(m - 1)


def rose_equation(s: float, x: float) -> float:
    """``(e^{sx} - 1)(e^{s(1-x)} - 1) - 4``; its positive root is the rose-2 entropy."""
    return math.expm1(s * x) * math.expm1(s * (1.0 - x)) - 4.0


def rose2_entropy(x: float) -> float:
    """Entropy of the two-petal rose with petal lengths ``x`` and ``1 - x`` by scalar bisection."""
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie in (0, 1)")
    lo, hi = 0.0, 1.0
    while rose_equation(hi, x) < 0:
        lo, hi = hi, 2 * hi
    while True:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            return mid
        if rose_equation(mid, x) < 0:
            lo = mid
        else:
            hi = mid


def ps_cylinder_weight(sol: EntropySolution, e: str) -> float:
    try:
        return float(sol.weights[sol.graph.index[e]])
    except KeyError:
        raise PathError(f"unknown edge {e!r}") from None


def contract_zero_edges(m: MetricStructure) -> MetricStructure:
    """Contract the zero-length forest of a non-singular semi-metric structure."""
    g = m.graph
    parent = {v: v for v in g.vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            v = parent[v]
        return v

    keep = []
    for name, i in zip(g.base_edges, range(0, g.n, 2)):
        if m.lengths[i] == 0:
            parent[find(g.origin(i))] = find(g.terminus(i))
        else:
            keep.append((name, i))
    verts = [v for v in g.vertices if find(v) == v]
    contracted = Graph(verts, [(name, find(g.origin(i)), find(g.terminus(i))) for name, i in keep], validate=False)
    lengths = np.array([m.lengths[i + d] for _, i in keep for d in (0, 1)])
    return classify_metric(contracted, lengths)
