"""Exception hierarchy for undirected-pagerank.

Every error carries a stable ``code`` which the CLI prints in its
machine-parseable error line.
"""

from typing import Optional


class PageRankError(Exception):
    """Base exception for all library errors."""

    code = "E_INTERNAL"


class InvalidGraphError(PageRankError, ValueError):
    """Raised when a graph violates the simple-graph invariants."""

    code = "E_GRAPH"


class EdgeListError(InvalidGraphError):
    """Raised when edge-list text cannot be parsed."""

    code = "E_EDGE_LIST"

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GeneratorError(PageRankError, ValueError):
    """Raised for an unknown family or invalid generator parameters."""

    code = "E_GENERATOR"


class AssumptionUnsatisfiableError(GeneratorError):
    """Raised when resampling never produced a connected non-bipartite graph."""

    code = "E_ASSUMPTION_UNSATISFIABLE"


class IsolatedVertexError(PageRankError, ValueError):
    """Raised when a vertex of degree 0 reaches transition-matrix construction."""

    code = "E_ISOLATED_VERTEX"

    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} has degree 0; row normalization is undefined")


class VectorError(PageRankError, ValueError):
    """Raised when a vector is not a valid probability vector."""

    code = "E_VECTOR"


class DimensionMismatchError(PageRankError, ValueError):
    """Raised when operand dimensions disagree."""

    code = "E_DIMENSION"


class ParameterError(PageRankError, ValueError):
    """Raised for out-of-range numeric parameters such as the damping constant."""

    code = "E_PARAMETER"


class DenseCapError(PageRankError, ValueError):
    """Raised when a dense computation is requested above the size cap."""

    code = "E_DENSE_CAP"


class NonStationaryError(PageRankError, ValueError):
    """Raised when a supposed stationary vector does not satisfy A^T f = f."""

    code = "E_NON_STATIONARY"

    def __init__(self, defect: float, slack: float):
        self.defect = defect
        super().__init__(f"||A^T f - f||_1 = {defect:.3e} exceeds slack {slack:.3e}")


class SweepSpecError(PageRankError, ValueError):
    """Raised when a sweep specification is malformed."""

    code = "E_SWEEP_SPEC"


class EmptyInputError(PageRankError, ValueError):
    """Raised when an operation needs at least one item."""

    code = "E_EMPTY"


class SingularMatrixError(PageRankError):
    """Raised when I - cA^T turns out singular, which the diagonal dominance rules out."""

    code = "E_INTERNAL"
