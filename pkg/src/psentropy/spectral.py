"""Transfer matrices of metric graphs and their Perron-Frobenius data."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, SingularStructureError
from .graph import Graph, MetricStructure


def default_tol() -> float:
    return float(os.environ.get("ENTROPY_TOL", "1e-12"))


@dataclass(frozen=True)
class TransferMatrix:
    """``A = diag(exp(-s L)) @ M`` together with ``M``, ``s`` and the edge order."""

    A: np.ndarray
    M: np.ndarray
    s: float
    edges: tuple[str, ...]


@dataclass(frozen=True)
class SpectralData:
    radius: float
    Y: np.ndarray
    Z: np.ndarray
    right_residual: float
    left_residual: float
    iterations: int

    def z_first_normalized(self, s: float, L1: float) -> np.ndarray:
        """Left vector rescaled so that its first entry is ``exp(s * L1)``."""
        return self.Z * (np.exp(s * L1) / self.Z[0])


def transfer_matrix(g: Graph, m: MetricStructure, s: float) -> TransferMatrix:
    if not m.usable:
        raise SingularStructureError("transfer matrix needs a positive or non-singular structure")
    if s < 0:
        raise ValueError("s must be >= 0")
    M = g.adjacency()
    A = np.exp(-s * m.lengths)[:, None] * M
    return TransferMatrix(A, M, float(s), g.edges)


def _perron_vector(A: np.ndarray, tol: float, max_iter: int, start: np.ndarray | None) -> tuple[float, np.ndarray, int]:
    """Power iteration on ``B = A + c I``; returns ``(r(A), unit positive vector, iterations)``.

    ``c = min(1, max row sum of A)``, so ``c = 1`` whenever ``r(A) >= 1``; the
    smaller shift only matters for nearly vanishing ``A``. After every
    unsuccessful check the iteration matrix is squared, doubling the effective
    power of ``B``. ``iterations`` counts matrix products of either kind. Stops
    once the Collatz-Wielandt bounds ``min/max (B x)_i / x_i`` agree to within
    ``tol`` relative.
    """
    n = A.shape[0]
    c = min(1.0, float(A.sum(axis=1).max()))
    if c <= 0:
        raise ConvergenceError("matrix has a zero row; not irreducible")
    B = A + c * np.eye(n)
    P = B
    x = np.ones(n) if start is None else np.array(start, dtype=float)
    x /= np.linalg.norm(x)
    it = 0
    while True:
        for _ in range(2):
            x = P @ x
            x /= np.linalg.norm(x)
        Bx = B @ x
        it += 3
        if np.all(x > 0):
            ratios = Bx / x
            lo, hi = ratios.min(), ratios.max()
            rho = 0.5 * (lo + hi)
            if hi - lo <= tol * rho:
                if rho < c:
                    raise ConvergenceError(f"shifted radius {rho} < {c}; matrix is not nonnegative")
                return rho - c, Bx / np.linalg.norm(Bx), it
        if it >= max_iter:
            break
        P = P @ P
        P /= P.max()
        it += 1
    raise ConvergenceError(f"power iteration did not reach tol={tol:g} in {max_iter} iterations")


def spectral_radius(
    A: TransferMatrix | np.ndarray,
    tol: float | None = None,
    max_iter: int | None = None,
    start: np.ndarray | None = None,
    start_left: np.ndarray | None = None,
) -> SpectralData:
    """Perron root of a nonnegative irreducible matrix with right/left vectors.

    ``Y`` has unit Euclidean norm and ``Z`` is scaled so that ``Z @ Y = 1``.
    The default start vector is all-ones.
    """
    mat = A.A if isinstance(A, TransferMatrix) else np.asarray(A, dtype=float)
    n = mat.shape[0]
    tol = default_tol() if tol is None else tol
    max_iter = 100 * n * n if max_iter is None else max_iter
    r, Y, it_r = _perron_vector(mat, tol, max_iter, start)
    _, Z, it_l = _perron_vector(mat.T, tol, max_iter, start_left)
    Z = Z / (Z @ Y)
    res_r = float(np.linalg.norm(mat @ Y - r * Y))
    res_l = float(np.linalg.norm(Z @ mat - r * Z))
    return SpectralData(r, Y, Z, res_r, res_l, it_r + it_l)


def phi(g: Graph, m: MetricStructure, s: float, tol: float | None = None) -> float:
    """Spectral radius of the transfer matrix at ``s``."""
    A = transfer_matrix(g, m, s).A
    return _perron_vector(A, default_tol() if tol is None else tol, 100 * g.n * g.n, None)[0]
