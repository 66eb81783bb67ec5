"""Exact entropy gradient through the implicit function theorem.

The Perron system ``F_i = exp(-s L_i) (M y)_i - y_i = 0`` together with
``|y|^2 = 1`` defines ``(y, s)`` implicitly as functions of the lengths. The
gradient comes from one linear solve with the transposed Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .entropy import EntropySolution, volume_entropy
from .errors import ConvergenceError, GraphValidationError
from .graph import Graph, MetricStructure
from .spectral import transfer_matrix

SOLVE_TOL = 1e-10


@dataclass(frozen=True)
class SensitivityResult:
    J: np.ndarray
    b: np.ndarray
    grad: np.ndarray
    solve_residual: float
    condition: float
    euler_residual: float
    critical_spread: float
    h: float

    def folded(self) -> np.ndarray:
        """Gradient with respect to non-oriented lengths (both orientations summed)."""
        return self.grad[0::2] + self.grad[1::2]


def jacobian(g: Graph, m: MetricStructure, sol: EntropySolution) -> np.ndarray:
    """``(n+1) x (n+1)`` Jacobian of the Perron system in ``(y, s)``.

    Blocks: ``A - I`` | ``-L_i y_i`` over ``2 y`` | ``0``.
    """
    n = g.n
    A = transfer_matrix(g, m, sol.h).A
    y = sol.Y
    J = np.zeros((n + 1, n + 1))
    J[:n, :n] = A - np.eye(n)
    J[:n, n] = -m.lengths * y
    J[n, :n] = 2.0 * y
    return J


def _spread(v: np.ndarray) -> float:
    return float((v.max() - v.min()) / v.mean())


def entropy_gradient(g: Graph, m: MetricStructure, sol: EntropySolution | None = None) -> SensitivityResult:
    """``dh/dL_i`` for every oriented edge.

    With ``u`` the last row of ``J^{-1}`` (solved from ``J^T u = e_{n+1}``) and
    ``dF_i/dL_i = -h y_i`` at the solution, ``dh/dL_i = h u_i y_i``.
    """
    sol = volume_entropy(g, m) if sol is None else sol
    n = g.n
    J = jacobian(g, m, sol)
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    try:
        lu = scipy.linalg.lu_factor(J.T)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise ConvergenceError(f"Jacobian factorization failed: {exc}") from exc
    u = scipy.linalg.lu_solve(lu, rhs)
    res = float(np.linalg.norm(J.T @ u - rhs))
    if not np.all(np.isfinite(u)) or res > SOLVE_TOL:
        raise ConvergenceError(f"Jacobian solve residual {res:.3g} exceeds {SOLVE_TOL:g}")
    b = u[:n]
    grad = sol.h * b * sol.Y
    euler = float(abs(m.lengths @ grad + sol.h) / sol.h)
    return SensitivityResult(
        J=J,
        b=b,
        grad=grad,
        solve_residual=res,
        condition=float(np.linalg.cond(J)),
        euler_residual=euler,
        critical_spread=_spread(sol.Z * sol.Y),
        h=sol.h,
    )


def critical_point_residual(g: Graph, m: MetricStructure, sol: EntropySolution | None = None) -> float:
    """Relative spread ``(max - min) / mean`` of ``z_i y_i`` over oriented edges.

    The gradient is proportional to ``z_i y_i`` (the last row of ``J^{-1}`` is
    a multiple of the left Perron vector), so the spread vanishes exactly when
    the gradient is parallel to ``(1, ..., 1)``, i.e. at a critical point of
    entropy on the fixed-volume simplex. Only defined for regular graphs.
    """
    if not g.is_regular():
        raise GraphValidationError("critical-point characterization needs a regular graph")
    sol = volume_entropy(g, m) if sol is None else sol
    return _spread(sol.Z * sol.Y)


def projected_gradient(grad: np.ndarray) -> np.ndarray:
    """Component of ``grad`` tangent to the fixed-volume hyperplane."""
    return grad - grad.mean()
