"""undirected-pagerank - personalized PageRank on undirected graphs."""

__version__ = "0.1.0"
__author__ = "undirected-pagerank contributors"

from .core.graph import Graph
from .core.transition import ProbabilityVector, RowStochasticMatrix
from .services.solver import PageRankConfig, PageRankResult

__all__ = [
    "Graph",
    "PageRankConfig",
    "PageRankResult",
    "ProbabilityVector",
    "RowStochasticMatrix",
    "__version__",
]
