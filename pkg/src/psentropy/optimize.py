"""Entropy minimization over volume-one metric structures, plus convexity and sup probes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .entropy import volume_entropy
from .errors import MetricError
from .graph import Graph, MetricStructure, classify_metric, metric_from_edges
from .graph_catalog import catalog
from .sensitivity import entropy_gradient


@dataclass
class OptimizeOptions:
    step: float = 0.1
    shrink: float = 0.5
    armijo: float = 1e-4
    tol: float = 1e-7
    max_iter: int = 2000
    floor: float = 1e-9
    max_backtracks: int = 30


@dataclass
class OptimizeResult:
    lengths: np.ndarray
    h: float
    iterations: int
    converged: bool
    boundary: bool
    trajectory: list[tuple[float, float]] = field(default_factory=list)

    @property
    def grad_norm(self) -> float:
        return self.trajectory[-1][1] if self.trajectory else float("nan")


def project_simplex(v: np.ndarray, total: float = 1.0, floor: float = 0.0) -> np.ndarray:
    """Euclidean projection onto ``{x : x >= floor, sum(x) = total}``."""
    v = np.asarray(v, dtype=float)
    n = v.size
    budget = total - n * floor
    if budget < 0:
        raise ValueError("floor too large for the requested total")
    u = np.sort(v - floor)[::-1]
    css = np.cumsum(u) - budget
    k = np.arange(1, n + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return floor + np.maximum(v - floor - theta, 0.0)


def _edge_entropy(g: Graph, x: np.ndarray) -> float:
    return volume_entropy(g, metric_from_edges(g, x)).h


def minimize_entropy(g: Graph, init: MetricStructure | np.ndarray, opts: OptimizeOptions | None = None) -> OptimizeResult:
    """Projected gradient descent with Armijo backtracking on the volume-one simplex.

    Works in non-oriented coordinates; the oriented gradient is folded by
    summing the two orientations of each edge.
    """
    opts = opts or OptimizeOptions()
    if isinstance(init, MetricStructure):
        if not init.symmetric or init.classification != "metric":
            raise MetricError("minimization starts from a positive metric structure")
        x = np.array(init.lengths[0::2])
    else:
        x = np.asarray(init, dtype=float).copy()
    if x.shape != (g.num_edges,) or np.any(x <= 0):
        raise MetricError("initial lengths must be positive, one per edge")
    x = project_simplex(x / x.sum(), floor=opts.floor)

    m = metric_from_edges(g, x)
    sol = volume_entropy(g, m)
    h = sol.h
    trajectory = []
    converged = False
    it = 0
    for it in range(1, opts.max_iter + 1):
        grad = entropy_gradient(g, m, sol).folded()
        # gradient mapping at unit step; equals the tangent projection in the interior
        gmap = x - project_simplex(x - grad, floor=opts.floor)
        gnorm = float(np.linalg.norm(gmap))
        trajectory.append((h, gnorm))
        if gnorm <= opts.tol:
            converged = True
            break
        t = opts.step
        for _ in range(opts.max_backtracks):
            x_new = project_simplex(x - t * grad, floor=opts.floor)
            m_new = metric_from_edges(g, x_new)
            sol_new = volume_entropy(g, m_new)
            # slack covers the root-finder's resolution of h
            if sol_new.h <= h - opts.armijo * grad @ (x - x_new) + sol.tol * h:
                break
            t *= opts.shrink
        else:
            # no decrease resolvable at the entropy solver's precision
            converged = gnorm <= 100 * opts.tol
            break
        x, m, sol, h = x_new, m_new, sol_new, sol_new.h
    boundary = bool(np.any(x <= 10 * opts.floor))
    return OptimizeResult(x, h, it, converged, boundary, trajectory)


def convexity_probe(g: Graph, trials: int, seed: int = 0, tol: float = 1e-9,
                    lambdas: list[float] | None = None) -> dict:
    """Sample pairs of positive metric structures and check midpoint convexity of entropy.

    Structures are not normalized to volume one. Returns the largest violation
    of ``h(t L1 + (1-t) L2) <= t h(L1) + (1-t) h(L2)`` and the count above ``tol``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    worst = -np.inf
    violations = 0
    for i in range(trials):
        L1 = rng.uniform(0.05, 2.0, g.num_edges)
        L2 = rng.uniform(0.05, 2.0, g.num_edges)
        t = lambdas[i % len(lambdas)] if lambdas else rng.uniform(0.0, 1.0)
        h1, h2 = _edge_entropy(g, L1), _edge_entropy(g, L2)
        hmix = _edge_entropy(g, t * L1 + (1 - t) * L2)
        gap = hmix - (t * h1 + (1 - t) * h2)
        worst = max(worst, gap)
        violations += gap > tol
    return {"trials": trials, "max_violation": float(worst), "violations": int(violations), "tol": tol}


def sup_entropy_demo(xs: list[float]) -> list[tuple[float, float]]:
    """Entropy of the two-petal rose with petal lengths ``(x, 1-x)`` for each ``x``."""
    out = []
    for x in xs:
        if not 0.0 < x < 1.0:
            raise ValueError("x must lie in (0, 1)")
        g, m = catalog("rose(2)", [x, 1.0 - x])
        out.append((float(x), volume_entropy(g, m).h))
    return out
