"""Exception hierarchy. Every error carries a stable ``kind`` string used by the CLI."""

from __future__ import annotations


class EntropyError(Exception):
    kind = "error"


class GraphSyntaxError(EntropyError):
    kind = "syntax"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEdgeError(GraphSyntaxError):
    kind = "duplicate-edge"


class UnknownVertexError(GraphSyntaxError):
    kind = "unknown-vertex"


class GraphValidationError(EntropyError):
    kind = "validation"


class MetricError(EntropyError):
    """Malformed length assignment (negative, missing, unknown edge)."""

    kind = "metric"


class SingularStructureError(EntropyError):
    """Structure has a zero-length cycle or is otherwise unusable for entropy."""

    kind = "singular"


class PathError(EntropyError):
    kind = "path"


class ConvergenceError(EntropyError):
    kind = "convergence"


class BracketError(ConvergenceError):
    kind = "bracket"


class BudgetExceededError(EntropyError):
    kind = "budget"


class CatalogError(EntropyError):
    kind = "catalog"
