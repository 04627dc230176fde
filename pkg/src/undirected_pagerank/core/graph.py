"""Simple undirected graph model, structural predicates and edge-list I/O."""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import breadth_first_order

from .errors import EdgeListError, InvalidGraphError

Edge = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Edges are stored as ``(u, w)`` with ``u < w``. Instances are immutable and
    safe to share between threads.
    """
    n: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidGraphError(f"vertex count must be positive, got {self.n}")

        normalized = set()
        for u, w in self.edges:
            if u == w:
                raise InvalidGraphError(f"self-loop ({u}, {w}) is not allowed")
            if min(u, w) < 0 or max(u, w) >= self.n:
                raise InvalidGraphError(
                    f"edge ({u}, {w}) references a vertex outside 0..{self.n - 1}"
                )
            normalized.add((min(u, w), max(u, w)))
        object.__setattr__(self, "edges", frozenset(normalized))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> List[Edge]:
        """Edges in lexicographic order."""
        return sorted(self.edges)

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """The symmetric 0/1 adjacency matrix B with sorted column indices."""
        if self.edges:
            us, ws = np.array(self.sorted_edges(), dtype=np.int64).T
        else:
            us = ws = np.empty(0, dtype=np.int64)
        rows = np.concatenate([us, ws])
        cols = np.concatenate([ws, us])
        data = np.ones(rows.size, dtype=np.float64)
        matrix = sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        matrix.sort_indices()
        return matrix

    def neighbors(self, vertex: int) -> np.ndarray:
        """Neighbors of ``vertex`` in ascending order."""
        b = self.adjacency
        return b.indices[b.indptr[vertex]:b.indptr[vertex + 1]]

    def is_regular(self) -> bool:
        d = degrees(self).d
        return bool(np.all(d == d[0]))


@dataclass(frozen=True, eq=False)
class DegreeVector:
    """Per-vertex degrees and their total ``m2 = 2|E|``."""
    d: np.ndarray
    m2: int


def degrees(g: Graph) -> DegreeVector:
    """Count edge incidences per vertex.

    Args:
        g: Graph

    Returns:
        DegreeVector with ``sum(d) == m2 == 2 * |edges|``
    """
    d = np.diff(g.adjacency.indptr).astype(np.int64)
    d.setflags(write=False)
    return DegreeVector(d=d, m2=2 * g.edge_count)


def is_connected(g: Graph) -> bool:
    """True iff a breadth-first traversal from vertex 0 reaches every vertex."""
    order = breadth_first_order(g.adjacency, 0, directed=False, return_predecessors=False)
    return len(order) == g.n


def is_bipartite(g: Graph) -> bool:
    """True iff breadth-first 2-coloring succeeds on every component."""
    b = g.adjacency
    color = np.full(g.n, -1, dtype=np.int8)
    for start in range(g.n):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in b.indices[b.indptr[u]:b.indptr[u + 1]]:
                if color[w] == -1:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return False
    return True


def structural_warnings(g: Graph) -> List[str]:
    """Describe how ``g`` misses the connected, non-bipartite standing assumption.

    The bounds hold regardless; these are informational only.
    """
    warnings = []
    if not is_connected(g):
        warnings.append(
            "graph is disconnected; f is stationary but not the unique limit distribution"
        )
    if is_bipartite(g):
        warnings.append("graph is bipartite; the simple random walk has no limit distribution")
    return warnings


def from_edge_list(pairs: Iterable[Sequence[int]], n_hint: Optional[int] = None) -> Graph:
    """Build a graph from integer pairs.

    Duplicate and reversed pairs collapse into one undirected edge.

    Args:
        pairs: Sequence of ``(u, w)`` vertex pairs
        n_hint: Minimum vertex count (for trailing isolated vertices)

    Returns:
        Graph with ``n = max(n_hint, 1 + max vertex index)``
    """
    edges = set()
    max_index = -1
    for pair in pairs:
        u, w = int(pair[0]), int(pair[1])
        if u < 0 or w < 0:
            raise InvalidGraphError(f"negative vertex index in pair ({u}, {w})")
        if u == w:
            raise InvalidGraphError(f"self-loop pair ({u}, {w}) rejected")
        edges.add((min(u, w), max(u, w)))
        max_index = max(max_index, u, w)

    n = max(n_hint or 0, max_index + 1)
    if n < 1:
        raise InvalidGraphError("empty edge list without a vertex count")
    return Graph(n=n, edges=frozenset(edges))


def parse_edge_list(text: str) -> Graph:
    """Parse edge-list text.

    One edge per line as two whitespace-separated 0-based integers. Lines
    starting with ``#`` are comments, blank lines are skipped and an optional
    ``n <count>`` header fixes the vertex count.
    """
    pairs: List[Edge] = []
    n_hint: Optional[int] = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        tokens = line.split()
        if tokens[0] == "n":
            if n_hint is not None or pairs:
                raise EdgeListError("vertex-count header must come first and only once", lineno)
            if len(tokens) != 2:
                raise EdgeListError(f"malformed header {line!r}", lineno)
            try:
                n_hint = int(tokens[1])
            except ValueError:
                raise EdgeListError(f"malformed vertex count {tokens[1]!r}", lineno) from None
            if n_hint < 1:
                raise EdgeListError(f"vertex count must be positive, got {n_hint}", lineno)
            continue

        if len(tokens) != 2:
            raise EdgeListError(f"expected two vertex indices, got {line!r}", lineno)
        try:
            u, w = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListError(f"non-integer vertex index in {line!r}", lineno) from None
        if u < 0 or w < 0:
            raise EdgeListError(f"negative vertex index in pair ({u}, {w})", lineno)
        if u == w:
            raise EdgeListError(f"self-loop pair ({u}, {w}) rejected", lineno)
        pairs.append((u, w))

    if n_hint is not None and pairs and max(max(p) for p in pairs) >= n_hint:
        raise EdgeListError(f"edge references a vertex outside the declared count {n_hint}")

    return from_edge_list(pairs, n_hint=n_hint)


def read_edge_list(path: Union[str, Path]) -> Graph:
    """Read an edge-list file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise EdgeListError(f"cannot read {path}: {e}") from e
    return parse_edge_list(text)


def write_edge_list(g: Graph) -> str:
    """Render ``g`` as edge-list text with an ``n`` header."""
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {w}" for u, w in g.sorted_edges())
    return "\n".join(lines) + "\n"
